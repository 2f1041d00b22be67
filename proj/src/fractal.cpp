#include "cascade/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace cascade {

namespace {

// Points stored per generation-j cell, or 0 if a cell is finer than storage.
std::uint64_t points_per_cell(const SamplePath& path, int j) {
  const std::uint64_t cells = checked_power(path.params.base, static_cast<unsigned>(j));
  const std::uint64_t stored = path.cells() / path.stride;
  return stored % cells == 0 ? stored / cells : 0;
}

void fit(DimensionFit& f, const std::vector<double>& xs) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd a(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = xs[static_cast<std::size_t>(i)];
    a(i, 1) = 1.0;
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(f.log_values);
  const Eigen::VectorXd resid = f.log_values - a * coef;
  const double ss_tot = (f.log_values.array() - f.log_values.mean()).square().sum();
  f.slope = coef(0);
  f.intercept = coef(1);
  f.r_squared = ss_tot > 0.0 ? 1.0 - resid.squaredNorm() / ss_tot : 1.0;
}

void require_scales(int lo, int hi) {
  if (lo < 0 || hi - lo + 1 < 4) throw std::invalid_argument("need at least 4 scales");
}

}  // namespace

DimensionFit increment_scaling_exponent(const SamplePath& path, int p_lo, int p_hi) {
  require_scales(p_lo, p_hi);
  if (p_lo < 2 || p_hi > static_cast<int>(path.depth) - 6) {
    throw std::invalid_argument("increment_scaling_exponent: p range must lie in [2, n - 6]");
  }
  const double log_b = std::log(static_cast<double>(path.params.base));
  DimensionFit f;
  f.log_values.resize(p_hi - p_lo + 1);
  std::vector<double> xs;
  for (int p = p_lo; p <= p_hi; ++p) {
    const std::uint64_t m = points_per_cell(path, p);
    if (m == 0) throw std::invalid_argument("increment_scaling_exponent: path decimated below generation p");
    const auto cells = static_cast<Eigen::Index>((path.values.size() - 1) / static_cast<Eigen::Index>(m));
    double sum = 0.0;
    std::size_t used = 0;
    for (Eigen::Index k = 0; k < cells; ++k) {
      const double d = std::fabs(path.values((k + 1) * static_cast<Eigen::Index>(m)) -
                                 path.values(k * static_cast<Eigen::Index>(m)));
      if (d == 0.0) {
        ++f.excluded;
      } else {
        sum += std::log(d);
        ++used;
      }
    }
    if (used == 0) throw std::runtime_error("increment_scaling_exponent: every increment vanishes");
    f.scales.push_back(p);
    f.log_values(p - p_lo) = sum / static_cast<double>(used) / log_b;
    xs.push_back(p);
  }
  fit(f, xs);
  f.estimate = -f.slope;
  return f;
}

DimensionFit box_dimension(const SamplePath& path, int j_lo, int j_hi) {
  require_scales(j_lo, j_hi);
  if (static_cast<int>(path.depth) < j_hi + 2) {
    throw std::invalid_argument("box_dimension: need n >= j_max + 2");
  }
  DimensionFit f;
  const int count = j_hi - j_lo + 1;
  f.log_values.resize(count);
  std::vector<double> xs;
  std::vector<double> counts(static_cast<std::size_t>(count));
  for (int j = j_lo; j <= j_hi; ++j) {
    if (points_per_cell(path, j) == 0) throw std::invalid_argument("box_dimension: path decimated below scale j");
  }

#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < count; ++i) {
    const int j = j_lo + i;
    const auto m = static_cast<Eigen::Index>(points_per_cell(path, j));
    const double side = std::pow(static_cast<double>(path.params.base), -j);
    const Eigen::Index columns = (path.values.size() - 1) / m;
    double n_j = 0.0;
    for (Eigen::Index c = 0; c < columns; ++c) {
      const auto window = path.values.segment(c * m, m + 1);
      n_j += std::floor(window.maxCoeff() / side) - std::floor(window.minCoeff() / side) + 1.0;
    }
    counts[static_cast<std::size_t>(i)] = n_j;
  }

  const double log_b = std::log(static_cast<double>(path.params.base));
  for (int i = 0; i < count; ++i) {
    f.scales.push_back(j_lo + i);
    f.log_values(i) = std::log(counts[static_cast<std::size_t>(i)]) / log_b;
    xs.push_back(j_lo + i);
  }
  fit(f, xs);
  f.estimate = f.slope;
  return f;
}

DimensionFit pointwise_holder(const SamplePath& path, double t, int j_lo, int j_hi) {
  require_scales(j_lo, j_hi);
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("pointwise_holder: t must lie in (0, 1)");
  const double b = path.params.base;
  const double log_b = std::log(b);
  const auto last = path.values.size() - 1;
  const double h = 1.0 / static_cast<double>(last);

  DimensionFit f;
  f.log_values.resize(j_hi - j_lo + 1);
  std::vector<double> xs;
  for (int j = j_lo; j <= j_hi; ++j) {
    const double r = std::pow(b, -j);
    const double lo = std::max(0.0, t - r), hi = std::min(1.0, t + r);
    // Ball endpoints by interpolation, interior extrema at stored points.
    double top = std::max(evaluate(path, lo), evaluate(path, hi));
    double bottom = std::min(evaluate(path, lo), evaluate(path, hi));
    const auto first = static_cast<Eigen::Index>(std::ceil(lo / h));
    const auto final = std::min(static_cast<Eigen::Index>(std::floor(hi / h)), last);
    if (final >= first) {
      const auto window = path.values.segment(first, final - first + 1);
      top = std::max(top, window.maxCoeff());
      bottom = std::min(bottom, window.minCoeff());
    }
    const double osc = top - bottom;
    if (!(osc > 0.0)) throw std::runtime_error("pointwise_holder: zero oscillation at a scale");
    f.scales.push_back(j);
    f.log_values(j - j_lo) = std::log(osc) / log_b;
    xs.push_back(-j);
  }
  fit(f, xs);
  f.estimate = f.slope;
  return f;
}

Eigen::VectorXd holder_profile(const SamplePath& path, int count, int j_lo, int j_hi) {
  if (count < 1) throw std::invalid_argument("holder_profile: count must be positive");
  Eigen::VectorXd out(count);
  for (int i = 0; i < count; ++i) {
    out(i) = pointwise_holder(path, (i + 0.5) / count, j_lo, j_hi).estimate;
  }
  return out;
}

}  // namespace cascade
