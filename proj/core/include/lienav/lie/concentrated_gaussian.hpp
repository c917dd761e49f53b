#pragma once

#include <random>

#include "lienav/lie/group.hpp"

namespace lienav::lie {

/// X = mean * exp(eps), eps ~ N(0, cov).
struct ConcentratedGaussian {
  GroupElement mean;
  Mat15 cov = Mat15::Identity();
};

/// Throws ErrorKind::kNotPositiveDefinite unless cov is symmetric to 1e-12
/// (relative) and strictly positive definite.
void check_covariance(const Mat15& cov);

/// (P + P^T) / 2
inline Mat15 symmetrized(const Mat15& p) { return 0.5 * (p + p.transpose()); }

/// Draws mean * exp(L z) with L the Cholesky factor of cov. For many draws
/// from the same distribution prefer CgdSampler.
GroupElement cgd_sample(const ConcentratedGaussian& d, std::mt19937_64& rng);

class CgdSampler {
 public:
  explicit CgdSampler(const ConcentratedGaussian& d);

  Tangent draw_tangent(std::mt19937_64& rng) const;
  GroupElement draw(std::mt19937_64& rng) const;

 private:
  GroupElement mean_;
  Mat15 chol_;
};

}  // namespace lienav::lie
