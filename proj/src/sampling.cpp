#include "cascade/sampling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cascade/sign_field.hpp"

namespace cascade {

namespace {

void check_work(const CascadeParams& params, unsigned n, std::size_t reps) {
  params.validate();
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  // Each replica draws sum_{l<=n} b^l < 2 b^n signs.
  const std::uint64_t leaves = checked_power(params.base, n);
  if (static_cast<double>(reps) * 2.0 * static_cast<double>(leaves) > static_cast<double>(kMaxReplicaWork)) {
    throw CapacityError("reps * b^n = " + std::to_string(reps) + " * " + std::to_string(leaves) +
                        " exceeds the Monte-Carlo budget");
  }
}

double level_scale(const CascadeParams& params, unsigned level) {
  if (params.hurst.is_symmetric()) return 1.0;
  return std::pow(static_cast<double>(params.base), -static_cast<double>(level) * params.hurst.value());
}

}  // namespace

Eigen::VectorXd sample_terminal(const CascadeParams& params, unsigned n, std::size_t reps) {
  check_work(params, n, reps);
  const double scale = level_scale(params, n);
  Eigen::VectorXd out(static_cast<Eigen::Index>(reps));
  const auto count = static_cast<std::int64_t>(reps);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t r = 0; r < count; ++r) {
    const auto sums = level_sums(params, n, static_cast<std::uint64_t>(r));
    out(r) = scale * static_cast<double>(sums.back());
  }
  return out;
}

Eigen::MatrixXd sample_martingale(const CascadeParams& params, unsigned n, std::size_t reps) {
  check_work(params, n, reps);
  Eigen::VectorXd scales(n + 1);
  for (unsigned k = 0; k <= n; ++k) scales(k) = level_scale(params, k);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(reps), n + 1);
  const auto count = static_cast<std::int64_t>(reps);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t r = 0; r < count; ++r) {
    const auto sums = level_sums(params, n, static_cast<std::uint64_t>(r));
    for (unsigned k = 0; k <= n; ++k) out(r, k) = scales(k) * static_cast<double>(sums[k]);
  }
  return out;
}

Eigen::MatrixXd sample_cell_increments(const CascadeParams& params, unsigned p, unsigned n, std::size_t reps) {
  if (p > n) throw std::invalid_argument("sample_cell_increments: p must not exceed n");
  check_work(params, n, reps);
  const std::uint64_t cells = checked_power(params.base, p);
  const std::uint64_t per_cell = checked_power(params.base, n - p);
  const double scale = level_scale(params, n);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(reps), static_cast<Eigen::Index>(cells));
  const auto count = static_cast<std::int64_t>(reps);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t r = 0; r < count; ++r) {
    const LeafSignField field = generate_leaf_signs(params, n, {static_cast<std::uint64_t>(r), false});
    for (std::uint64_t c = 0; c < cells; ++c) {
      out(r, static_cast<Eigen::Index>(c)) = scale * static_cast<double>(field.sum(c * per_cell, (c + 1) * per_cell));
    }
  }
  return out;
}

}  // namespace cascade
