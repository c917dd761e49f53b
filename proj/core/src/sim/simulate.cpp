#include "lienav/sim/simulate.hpp"

namespace lienav::sim {

SimDataset simulate(const SimConfig& cfg) {
  std::mt19937_64 rng(cfg.noise.seed);
  SimDataset ds;
  ds.reference = make_reference(cfg.profile, cfg.params, cfg.imu_rate);
  const std::vector<ImuSample> ideal = inverse_mechanization(ds.reference);
  CorruptedImu imu = corrupt_imu(ideal, cfg.noise, rng);
  ds.imu = std::move(imu.samples);
  ds.gnss = gen_gnss(ds.reference, cfg.lever, cfg.noise, cfg.gnss_rate, rng);
  if (!cfg.outlier_epochs.empty()) {
    ds.gnss = inject_outliers(ds.gnss, cfg.outlier_epochs, cfg.outlier_magnitude, rng);
  }
  ds.truth.reserve(ds.imu.size());
  for (std::size_t k = 0; k < ds.imu.size(); ++k) {
    const GroupElement& x = ds.reference.states[k];
    lie::Vec6 bias;
    bias << imu.bias_a[k], imu.bias_g[k];
    ds.truth.emplace_back(x.rot(), x.vel(), x.pos(), bias);
  }
  return ds;
}

}  // namespace lienav::sim
