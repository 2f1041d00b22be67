#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Core>

#include "cascade/params.hpp"

namespace cascade {

/// Total sign draws a single Monte-Carlo call may request.
inline constexpr std::uint64_t kMaxReplicaWork = std::uint64_t{1} << 40;

/// reps independent draws of Z_n = B_n(1). Replica r expands its own tree on
/// RNG stream r (see generate_leaf_signs), keeping only one level at a time,
/// so draw r equals the terminal value of the path built from stream r.
/// Replicas run concurrently; the result does not depend on the schedule.
/// The symmetric walk uses unit weights: draws are sums of b^n fair signs.
Eigen::VectorXd sample_terminal(const CascadeParams& params, unsigned n, std::size_t reps);

/// Z_0, ..., Z_n along each replica's martingale: reps x (n + 1).
Eigen::MatrixXd sample_martingale(const CascadeParams& params, unsigned n, std::size_t reps);

/// Increments of the raw path B_n over the b^p cells of generation p, one row
/// per replica: reps x b^p. Requires p <= n.
Eigen::MatrixXd sample_cell_increments(const CascadeParams& params, unsigned p, unsigned n, std::size_t reps);

}  // namespace cascade
