#include "cascade/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cascade/moments.hpp"

namespace cascade {

const char* to_string(PathKind k) {
  switch (k) {
    case PathKind::Raw: return "raw";
    case PathKind::NormalizedX: return "normalized_x";
    case PathKind::NormalizedTilde: return "normalized_tilde";
  }
  return "unknown";
}

std::uint64_t SamplePath::cells() const { return checked_power(params.base, depth); }

double SamplePath::time(Eigen::Index i) const {
  return static_cast<double>(static_cast<std::uint64_t>(i) * stride) /
         std::pow(static_cast<double>(params.base), static_cast<double>(depth));
}

SamplePath build_path(const LeafSignField& signs, const CascadeParams& params, std::uint64_t stride) {
  if (signs.base != params.base) throw std::invalid_argument("build_path: base mismatch");
  const std::uint64_t cells = signs.size();
  if (stride == 0 || cells % stride != 0) throw std::invalid_argument("build_path: stride must divide b^n");

  SamplePath path;
  path.depth = signs.depth;
  path.stride = stride;
  path.kind = PathKind::Raw;
  path.params = params;
  path.values.resize(static_cast<Eigen::Index>(cells / stride + 1));

  // One scale factor per depth; the partial sums are exact integers.
  const double scale = params.hurst.is_symmetric()
                           ? 1.0
                           : std::pow(static_cast<double>(params.base), -static_cast<double>(signs.depth) *
                                                                            params.hurst.value());
  std::int64_t partial = 0;
  path.values(0) = 0.0;
  if (stride == 1) {
    for (std::uint64_t k = 0; k < cells; ++k) {
      partial += signs.sign(k);
      path.values(static_cast<Eigen::Index>(k + 1)) = scale * static_cast<double>(partial);
    }
  } else {
    for (std::uint64_t i = 0; i < cells / stride; ++i) {
      partial += signs.sum(i * stride, (i + 1) * stride);
      path.values(static_cast<Eigen::Index>(i + 1)) = scale * static_cast<double>(partial);
    }
  }
  return path;
}

double evaluate(const SamplePath& path, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("evaluate: t must lie in [0, 1]");
  const Eigen::Index last = path.values.size() - 1;
  const double x = t * static_cast<double>(last);
  const auto k = std::min(static_cast<Eigen::Index>(std::floor(x)), last);
  if (k == last) return path.values(last);
  const double frac = x - static_cast<double>(k);
  if (frac == 0.0) return path.values(k);
  return path.values(k) + frac * (path.values(k + 1) - path.values(k));
}

double normalization_divisor(const CascadeParams& params, unsigned depth) {
  const double b = params.base;
  const double n = depth;
  switch (regime_of(params)) {
    case Regime::Symmetric:
      return std::pow(b, n / 2.0);
    case Regime::Divergent:
      return sigma(params) * std::pow(b, n * (0.5 - params.hurst.value()));
    case Regime::Critical:
      if (depth == 0) throw std::domain_error("critical normalization sigma sqrt(n) is undefined at n = 0");
      return sigma(params) * std::sqrt(n);
    case Regime::Convergent:
      return sigma(params);
  }
  return 1.0;
}

PathKind normalized_kind(Regime regime) {
  return regime == Regime::Convergent ? PathKind::NormalizedTilde : PathKind::NormalizedX;
}

SamplePath normalize_path(const SamplePath& path, const CascadeParams& params) {
  if (path.kind != PathKind::Raw) throw std::invalid_argument("normalize_path: path is already normalized");
  if (!(path.params.base == params.base && path.params.hurst == params.hurst)) {
    throw std::invalid_argument("normalize_path: parameters do not match the path");
  }
  SamplePath out = path;
  out.values /= normalization_divisor(params, path.depth);
  out.kind = normalized_kind(regime_of(params));
  return out;
}

std::uint64_t decimation_stride(int base, unsigned depth, std::uint64_t max_points) {
  const std::uint64_t cells = checked_power(base, depth);
  std::uint64_t stride = 1;
  while (cells / stride > max_points) stride *= static_cast<std::uint64_t>(base);
  return stride;
}

SelfSimilarityReport verify_self_similarity(const LeafSignField& field, const CascadeParams& params,
                                            unsigned prefix_depth) {
  if (!field.has_levels()) {
    throw std::invalid_argument("verify_self_similarity: the field must retain its per-level signs");
  }
  if (prefix_depth > field.depth) throw std::invalid_argument("verify_self_similarity: p exceeds depth");
  const unsigned p = prefix_depth;
  const unsigned n = field.depth - p;
  const auto b = static_cast<std::uint64_t>(field.base);
  const std::uint64_t prefixes = checked_power(field.base, p);
  const std::uint64_t sub_cells = checked_power(field.base, n);

  const auto level_scale = [&](unsigned levels) {
    return params.hurst.is_symmetric()
               ? 1.0
               : std::pow(static_cast<double>(field.base), -static_cast<double>(levels) * params.hurst.value());
  };
  const double total_scale = level_scale(field.depth);
  const double prefix_scale = level_scale(p);
  const double sub_scale = level_scale(n);

  SelfSimilarityReport report;
  report.prefix_depth = p;
  std::vector<int> bold(sub_cells), next;
  for (std::uint64_t w = 0; w < prefixes; ++w) {
    // boldeps(w) from the raw signs along the prefix.
    int prefix_sign = 1;
    for (unsigned l = 1; l <= p; ++l) {
      const std::uint64_t node = w / checked_power(field.base, p - l);
      prefix_sign *= field.raw_levels[l - 1].get(node) ? -1 : 1;
    }
    // Sub-cascade signs boldeps_w(u) = prod_k eps(w u_1 ... u_k).
    bold.assign(1, 1);
    std::uint64_t width = 1;
    for (unsigned k = 1; k <= n; ++k) {
      width *= b;
      next.assign(width, 1);
      const BitArray& raw = field.raw_levels[p + k - 1];
      for (std::uint64_t u = 0; u < width; ++u) {
        next[u] = bold[u / b] * (raw.get(w * width + u) ? -1 : 1);
      }
      bold.swap(next);
    }
    std::int64_t global = 0, local = 0;
    for (std::uint64_t j = 0; j < sub_cells; ++j) {
      global += field.sign(w * sub_cells + j);
      local += bold[j];
      const double lhs = total_scale * static_cast<double>(global);
      const double rhs = prefix_sign * prefix_scale * (sub_scale * static_cast<double>(local));
      const double violation = std::fabs(lhs - rhs) / std::max(std::fabs(lhs), total_scale);
      report.max_violation = std::max(report.max_violation, violation);
      ++report.points_checked;
    }
  }
  report.holds = report.max_violation < 1e-10;
  return report;
}

}  // namespace cascade
