// Exhaustive moment oracle; included from moments.hpp.
#pragma once

#include <bit>
#include <map>
#include <utility>

namespace cascade {

template <typename Scalar>
Vector<Scalar> enumerate_z_moments(const CascadeCoefficients<Scalar>& c, unsigned n, unsigned q_max) {
  const auto b = static_cast<std::uint64_t>(c.base);
  std::vector<std::uint64_t> offsets{0};  // first global index of each level >= 1
  std::uint64_t width = 1, nodes = 0;
  for (unsigned l = 1; l <= n; ++l) {
    width *= b;
    offsets.push_back(nodes);
    nodes += width;
    if (nodes > 24) throw CapacityError("enumeration over more than 2^24 sign assignments");
  }

  // histogram[(#minus, leaf sum)] = number of assignments
  std::map<std::pair<unsigned, std::int64_t>, std::uint64_t> histogram;
  std::vector<int> bold(nodes);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nodes); ++mask) {
    std::int64_t sum = 0;
    std::uint64_t level_width = 1;
    for (unsigned l = 1; l <= n; ++l) {
      level_width *= b;
      for (std::uint64_t i = 0; i < level_width; ++i) {
        const std::uint64_t g = offsets[l] + i;
        const int eps = ((mask >> g) & 1U) ? -1 : 1;
        const int parent = (l == 1) ? 1 : bold[offsets[l - 1] + i / b];
        bold[g] = parent * eps;
        if (l == n) sum += bold[g];
      }
    }
    if (n == 0) sum = 1;
    ++histogram[{static_cast<unsigned>(std::popcount(mask)), sum}];
  }

  const Scalar wn = ipow(c.weight, n);
  Vector<Scalar> m(q_max + 1);
  for (unsigned q = 0; q <= q_max; ++q) m(q) = Scalar(0);
  for (const auto& [key, count] : histogram) {
    const auto [minus, sum] = key;
    const Scalar prob = Scalar(static_cast<double>(count)) *
                        ipow(c.p_plus, static_cast<unsigned>(nodes - minus)) * ipow(c.p_minus, minus);
    const Scalar z = wn * Scalar(static_cast<double>(sum));
    Scalar zq(1);
    for (unsigned q = 0; q <= q_max; ++q) {
      m(q) = m(q) + prob * zq;
      zq = zq * z;
    }
  }
  return m;
}

}  // namespace cascade
