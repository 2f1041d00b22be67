#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "cascade/path.hpp"

namespace cascade {

/// Ordinary least squares of `log_values` (base-b logarithms) on `scales`.
struct DimensionFit {
  std::vector<int> scales;
  Eigen::VectorXd log_values;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double estimate = 0.0;
  std::size_t excluded = 0;  // zero increments left out of the averages
};

/// Mean over the generation-p cells of log_b |B(t_w + b^-p) - B(t_w)|,
/// regressed on p for p in [p_lo, p_hi]; estimate = -slope. Requires
/// 2 <= p_lo, p_hi <= n - 6 and at least 4 scales. Zero increments are
/// skipped and counted in `excluded`.
DimensionFit increment_scaling_exponent(const SamplePath& path, int p_lo = 4, int p_hi = 12);

/// Box counting with squares of side b^-j: N_j = sum over the b^j columns of
/// floor(max / side) - floor(min / side) + 1, where min and max are taken
/// over the stored points of the column (the extrema of a piecewise-linear
/// path sit on grid points). estimate = slope of log_b N_j on j. Requires
/// n >= j_hi + 2 and at least 4 scales.
DimensionFit box_dimension(const SamplePath& path, int j_lo = 4, int j_hi = 12);

/// log_b of sup - inf of the path over |s - t| <= b^-j, regressed on -j;
/// estimate = slope. Requires t in (0, 1) and at least 4 scales.
DimensionFit pointwise_holder(const SamplePath& path, double t, int j_lo = 4, int j_hi = 12);

/// pointwise_holder at t_i = (i + 1/2) / count, i = 0..count-1.
Eigen::VectorXd holder_profile(const SamplePath& path, int count = 64, int j_lo = 4, int j_hi = 12);

}  // namespace cascade
