#include <random>

#include <benchmark/benchmark.h>

#include "lienav/estimation/ekf.hpp"
#include "lienav/estimation/rts.hpp"
#include "lienav/ins/earth.hpp"
#include "lienav/lie/group.hpp"

using namespace lienav;

namespace {

lie::Tangent some_tangent(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  lie::Tangent x;
  for (int i = 0; i < 15; ++i) x(i) = 0.5 * n(rng);
  return x;
}

lie::ConcentratedGaussian nav_state() {
  const ins::Geodetic g{0.78, 0.12, 300.0};
  const lie::GroupElement x(ins::attitude_ecef(Eigen::Vector3d(0.01, -0.02, 0.5), g.lat, g.lon),
                            Eigen::Vector3d(3.0, 4.0, 0.0), ins::ecef_from_geodetic(g), lie::Vec6::Zero());
  return {x, 1e-4 * lie::Mat15::Identity()};
}

ins::ImuSample level_input(const lie::GroupElement& x) {
  const Eigen::Matrix3d ct = x.rot().transpose();
  return {0.0, ct * ins::earth_rate_ecef() + Eigen::Vector3d(0.0, 0.0, 0.05),
          -ct * ins::gravity_ecef(x.pos())};
}

}  // namespace

static void BM_GroupExp(benchmark::State& state) {
  const lie::Tangent x = some_tangent(1);
  for (auto _ : state) benchmark::DoNotOptimize(lie::group_exp(x));
}
BENCHMARK(BM_GroupExp);

static void BM_GroupLog(benchmark::State& state) {
  const lie::GroupElement g = lie::group_exp(some_tangent(2));
  for (auto _ : state) benchmark::DoNotOptimize(lie::group_log(g));
}
BENCHMARK(BM_GroupLog);

static void BM_RightJacobian(benchmark::State& state) {
  const lie::Tangent x = some_tangent(3);
  for (auto _ : state) benchmark::DoNotOptimize(lie::right_jacobian(x));
}
BENCHMARK(BM_RightJacobian);

static void BM_Predict(benchmark::State& state) {
  const lie::ConcentratedGaussian s = nav_state();
  const ins::ImuSample u = level_input(s.mean);
  const ins::ImuNoiseParams noise{1e-4, 1e-3, 1e-6, 1e-5};
  for (auto _ : state) benchmark::DoNotOptimize(estimation::ekf_predict(s, u, 0.005, noise));
}
BENCHMARK(BM_Predict);

static void BM_Update(benchmark::State& state) {
  const lie::ConcentratedGaussian s = nav_state();
  ins::GnssFix fix;
  fix.pos = s.mean.pos() + Eigen::Vector3d(0.01, -0.02, 0.005);
  fix.sigma = Eigen::Vector3d(0.01, 0.01, 0.03);
  const estimation::GateConfig gate;
  for (auto _ : state) benchmark::DoNotOptimize(estimation::ekf_update(s, fix, {}, gate));
}
BENCHMARK(BM_Update);
BENCHMARK_MAIN();
