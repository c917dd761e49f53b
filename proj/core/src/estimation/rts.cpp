#include "lienav/estimation/rts.hpp"

#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "lienav/error.hpp"

namespace lienav::estimation {

namespace {
constexpr double kEigenFloor = 1e-15;
}  // namespace

Mat15 repair_spd(const Mat15& p) {
  const Mat15 s = lie::symmetrized(p);
  const double floor = kEigenFloor * std::max(s.trace(), 0.0);
  const Eigen::LLT<Mat15> llt(s);
  if (llt.info() == Eigen::Success) {
    const auto d = llt.matrixLLT().diagonal();
    if (d.cwiseAbs2().minCoeff() > floor) return s;
  }
  const Eigen::SelfAdjointEigenSolver<Mat15> eig(s);
  const lie::Tangent clamped = eig.eigenvalues().cwiseMax(floor);
  return lie::symmetrized(eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose());
}

std::vector<ConcentratedGaussian> rts_smooth(std::span<const FilterEpoch> history) {
  if (history.empty()) throw Error(ErrorKind::kInvalidArgument, "rts_smooth: empty history");
  const std::size_t n = history.size();
  std::vector<ConcentratedGaussian> out(n);
  out[n - 1] = history[n - 1].updated;
  for (std::size_t k = n - 1; k-- > 0;) {
    const FilterEpoch& next = history[k + 1];
    const Mat15& p = history[k].updated.cov;
    const Eigen::LLT<Mat15> llt(next.predicted.cov);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorKind::kSmootherGain,
                  "rts_smooth: predicted covariance not invertible at epoch " +
                      std::to_string(k + 1) + " (t=" + std::to_string(next.t) + ")");
    }
    // G = P F^T Pp^-1 = (Pp^-1 F P)^T with P and Pp symmetric.
    const Mat15 g = llt.solve(next.F * p).transpose();
    const Tangent d = lie::group_log(next.predicted.mean.inverse() * out[k + 1].mean);
    out[k].mean = history[k].updated.mean * lie::group_exp(g * d);
    out[k].cov = repair_spd(p + g * (out[k + 1].cov - next.predicted.cov) * g.transpose());
  }
  return out;
}

std::vector<double> nees(std::span<const ConcentratedGaussian> estimates,
                         std::span<const GroupElement> truth) {
  if (estimates.size() != truth.size()) {
    throw Error(ErrorKind::kMisaligned, "nees: " + std::to_string(estimates.size()) +
                                            " estimates vs " + std::to_string(truth.size()) +
                                            " truth epochs");
  }
  std::vector<double> out;
  out.reserve(estimates.size());
  for (std::size_t k = 0; k < estimates.size(); ++k) {
    const Tangent eps = lie::group_log(estimates[k].mean.inverse() * truth[k]);
    const Eigen::LLT<Mat15> llt(estimates[k].cov);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorKind::kNotPositiveDefinite, "nees: covariance not SPD at epoch " + std::to_string(k));
    }
    out.push_back(eps.dot(llt.solve(eps)));
  }
  return out;
}

std::vector<double> nees(std::span<const FilterEpoch> history, std::span<const GroupElement> truth) {
  std::vector<ConcentratedGaussian> est;
  est.reserve(history.size());
  for (const auto& e : history) est.push_back(e.updated);
  return nees(est, truth);
}

}  // namespace lienav::estimation
