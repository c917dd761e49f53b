#pragma once

#include <span>
#include <vector>

#include "lienav/estimation/filter.hpp"

namespace lienav::estimation {

/// Backward smoothing pass over a filter history. Throws kSmootherGain when a
/// predicted covariance cannot be factorized.
std::vector<ConcentratedGaussian> rts_smooth(std::span<const FilterEpoch> history);

/// Symmetrizes and clamps eigenvalues below 1e-15 * trace.
Mat15 repair_spd(const Mat15& p);

/// Per-epoch eps^T P^-1 eps with eps = log(mean^-1 truth).
std::vector<double> nees(std::span<const ConcentratedGaussian> estimates,
                         std::span<const GroupElement> truth);
std::vector<double> nees(std::span<const FilterEpoch> history,
                         std::span<const GroupElement> truth);

}  // namespace lienav::estimation
