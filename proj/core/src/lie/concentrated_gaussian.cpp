#include "lienav/lie/concentrated_gaussian.hpp"

#include <Eigen/Cholesky>

#include "lienav/error.hpp"

namespace lienav::lie {

void check_covariance(const Mat15& cov) {
  if (!cov.allFinite()) {
    throw Error(ErrorKind::kNotPositiveDefinite, "covariance has non-finite entries");
  }
  const double scale = cov.cwiseAbs().maxCoeff();
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorKind::kNotPositiveDefinite, "covariance is not symmetric");
  }
  Eigen::LLT<Mat15> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::kNotPositiveDefinite, "covariance Cholesky factorization failed");
  }
}

CgdSampler::CgdSampler(const ConcentratedGaussian& d) : mean_(d.mean) {
  check_covariance(d.cov);
  chol_ = Eigen::LLT<Mat15>(d.cov).matrixL();
}

Tangent CgdSampler::draw_tangent(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Tangent z;
  for (int i = 0; i < kDim; ++i) z(i) = normal(rng);
  return chol_ * z;
}

GroupElement CgdSampler::draw(std::mt19937_64& rng) const {
  return mean_ * group_exp(draw_tangent(rng));
}

GroupElement cgd_sample(const ConcentratedGaussian& d, std::mt19937_64& rng) {
  return CgdSampler(d).draw(rng);
}

}  // namespace lienav::lie
