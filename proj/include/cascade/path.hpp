#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "cascade/params.hpp"
#include "cascade/sign_field.hpp"

namespace cascade {

enum class PathKind {
  Raw,              // B_n
  NormalizedX,      // X_n = B_n / (sigma a_n), H <= 1/2
  NormalizedTilde,  // B_n / sigma_H, H > 1/2
};

const char* to_string(PathKind k);

/// Piecewise-linear path on the b-adic grid of generation `depth`.
/// values(i) is the path at t = i * stride * b^-depth; stride > 1 only for
/// decimated output, where the stored points are a subset of the grid.
struct SamplePath {
  unsigned depth = 0;
  std::uint64_t stride = 1;
  PathKind kind = PathKind::Raw;
  CascadeParams params;
  Eigen::VectorXd values;

  std::uint64_t cells() const;  // b^depth
  double time(Eigen::Index i) const;
};

/// Grid value at k b^-n is b^(-nH) sum_{j<k} boldeps(w_j). Values are formed
/// as (single scale factor) * (exact integer partial sum), so every increment
/// has magnitude b^(-nH) up to one rounding.
SamplePath build_path(const LeafSignField& signs, const CascadeParams& params,
                      std::uint64_t stride = 1);

/// Linear interpolation between stored points; exact at stored points.
/// Throws std::domain_error for t outside [0, 1].
double evaluate(const SamplePath& path, double t);

/// sigma b^(n(1/2-H)) (divergent), sigma sqrt(n) (critical), b^(n/2)
/// (symmetric) or sigma_H (convergent).
double normalization_divisor(const CascadeParams& params, unsigned depth);

PathKind normalized_kind(Regime regime);

/// Requires a Raw path. Throws std::domain_error at the critical point with
/// n = 0, where the sqrt(n) divisor vanishes.
SamplePath normalize_path(const SamplePath& path, const CascadeParams& params);

/// Stride giving at most max_points + 1 stored points (power of b).
std::uint64_t decimation_stride(int base, unsigned depth, std::uint64_t max_points = std::uint64_t{1} << 16);

struct SelfSimilarityReport {
  unsigned prefix_depth = 0;
  std::uint64_t points_checked = 0;
  double max_violation = 0.0;  // relative
  bool holds = false;          // max_violation < 1e-10
};

/// For every w of length p and every grid t in I_w checks
///   B_{p+n}(t) - B_{p+n}(t_w) = boldeps(w) b^(-pH) B_n(w)(rescaled t)
/// where boldeps(w) and the sub-cascade B_n(w) are rebuilt from the retained
/// raw signs and the left side comes from the stored leaf field.
/// Throws std::invalid_argument if the field has no retained levels.
SelfSimilarityReport verify_self_similarity(const LeafSignField& field, const CascadeParams& params,
                                            unsigned prefix_depth);

}  // namespace cascade
