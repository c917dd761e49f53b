#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "lienav/alignment/alignment.hpp"
#include "lienav/error.hpp"
#include "lienav/estimation/filter.hpp"

namespace lienav::alignment {

double heading_log_likelihood(const HeadingProblem& problem, double psi0) {
  if (problem.imu.empty()) throw Error(ErrorKind::kData, "heading alignment: empty IMU stream");
  constexpr double kTimeTolerance = 1e-6;
  const double t0 = problem.imu.front().t;
  const double t1 = t0 + problem.prefix_s;
  const auto imu_end = std::upper_bound(problem.imu.begin(), problem.imu.end(), t1,
                                        [](double t, const ImuSample& s) { return t < s.t; });
  const auto fix_begin =
      std::lower_bound(problem.gnss.begin(), problem.gnss.end(), t0 - kTimeTolerance,
                       [](const GnssFix& f, double t) { return f.t < t; });
  const auto fix_end = std::upper_bound(fix_begin, problem.gnss.end(), t1,
                                        [](double t, const GnssFix& f) { return t < f.t; });

  const double prior = 0.5 * std::pow((psi0 - problem.prior_mean) / problem.sigma_psi, 2);
  double cost = 0.0;
  try {
    const ConcentratedGaussian init =
        init_state(problem.stat, problem.gnss, psi0, problem.lever, problem.p0);
    estimation::FilterOptions options;
    options.gate.mode = estimation::GateMode::kOff;
    options.lever = problem.lever;
    options.keep_history = false;
    const estimation::InsProcessModel model(problem.noise);
    estimation::run_filter(
        init, std::span<const ImuSample>(problem.imu.begin(), imu_end),
        std::span<const GnssFix>(fix_begin, fix_end), model, options,
        [&cost](const GnssFix&, const estimation::GateReport& g) {
          const double logdet = std::log((2.0 * std::numbers::pi * g.innovation_cov).determinant());
          cost += 0.5 * logdet + 0.5 * g.zeta;
        });
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
  if (!std::isfinite(cost)) return std::numeric_limits<double>::infinity();
  return cost + prior;
}

HeadingPosterior fit_parabola(const std::array<double, 3>& psi, const std::array<double, 3>& cost,
                              bool allow_extrapolation) {
  if (psi[0] == psi[1] || psi[1] == psi[2] || psi[0] == psi[2]) {
    throw Error(ErrorKind::kInvalidArgument, "heading alignment: guesses must be distinct");
  }
  for (double c : cost) {
    if (!std::isfinite(c)) {
      throw Error(ErrorKind::kNonConvexFit, "heading alignment: a candidate filter run diverged");
    }
  }
  Eigen::Matrix3d a;
  Eigen::Vector3d c;
  for (int i = 0; i < 3; ++i) {
    a.row(i) << psi[i] * psi[i], psi[i], 1.0;
    c(i) = cost[i];
  }
  const Eigen::Vector3d m = a.partialPivLu().solve(c);

  HeadingPosterior out;
  out.psi = psi;
  out.cost = cost;
  out.curvature = m(0);
  if (!(m(0) > 0.0)) {
    throw Error(ErrorKind::kNonConvexFit, "heading alignment: fitted curvature " +
                                              std::to_string(m(0)) + " is not positive");
  }
  out.psi_star = -m(1) / (2.0 * m(0));
  out.sigma_psi_star = 1.0 / std::sqrt(2.0 * m(0));
  const auto [lo, hi] = std::minmax_element(psi.begin(), psi.end());
  if (!allow_extrapolation && (out.psi_star <= *lo || out.psi_star >= *hi)) {
    throw Error(ErrorKind::kNonConvexFit, "heading alignment: minimizer " +
                                              std::to_string(out.psi_star) +
                                              " rad lies outside the guesses");
  }
  return out;
}

HeadingPosterior heading_align(const HeadingProblem& problem, const std::array<double, 3>& guesses,
                               bool allow_extrapolation) {
  std::array<double, 3> cost{};
  for (std::size_t i = 0; i < 3; ++i) cost[i] = heading_log_likelihood(problem, guesses[i]);
  return fit_parabola(guesses, cost, allow_extrapolation);
}

}  // namespace lienav::alignment
