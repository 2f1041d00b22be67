#include "cascade/sign_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cascade {

SignThreshold SignThreshold::from_probability(double p_plus) {
  if (!(p_plus >= 0.5 && p_plus <= 1.0)) {
    throw std::invalid_argument("sign probability must lie in [1/2, 1]");
  }
  if (p_plus == 1.0) return {true, 0};
  return {false, static_cast<std::uint64_t>(std::ldexp(p_plus, 64))};
}

std::size_t BitArray::count(std::size_t first, std::size_t last) const {
  if (first >= last) return 0;
  std::size_t fw = first >> 6, lw = (last - 1) >> 6;
  const std::uint64_t head = ~0ULL << (first & 63);
  const std::uint64_t tail = ~0ULL >> (63 - ((last - 1) & 63));
  if (fw == lw) return static_cast<std::size_t>(std::popcount(words_[fw] & head & tail));
  std::size_t n = static_cast<std::size_t>(std::popcount(words_[fw] & head));
  for (std::size_t w = fw + 1; w < lw; ++w) n += static_cast<std::size_t>(std::popcount(words_[w]));
  return n + static_cast<std::size_t>(std::popcount(words_[lw] & tail));
}

std::uint64_t checked_power(int base, unsigned n, std::uint64_t limit) {
  std::uint64_t v = 1;
  for (unsigned i = 0; i < n; ++i) {
    if (v > limit / static_cast<std::uint64_t>(base)) {
      throw CapacityError("b^n = " + std::to_string(base) + "^" + std::to_string(n) +
                          " exceeds the capacity of " + std::to_string(limit) + " nodes");
    }
    v *= static_cast<std::uint64_t>(base);
  }
  return v;
}

namespace {

// Duplicates each of the 32 low bits of x into two adjacent bits.
std::uint64_t spread_pairs(std::uint64_t x) {
  x &= 0xFFFFFFFFULL;
  x = (x | (x << 16)) & 0x0000FFFF0000FFFFULL;
  x = (x | (x << 8)) & 0x00FF00FF00FF00FFULL;
  x = (x | (x << 4)) & 0x0F0F0F0F0F0F0F0FULL;
  x = (x | (x << 2)) & 0x3333333333333333ULL;
  x = (x | (x << 1)) & 0x5555555555555555ULL;
  return x | (x << 1);
}

std::uint64_t tail_mask(std::size_t size) {
  const unsigned r = size & 63;
  return r == 0 ? ~0ULL : (~0ULL >> (64 - r));
}

/// Fills `children` (level `level`) from `parents` (level - 1).
void expand_level(const BitArray& parents, unsigned level, int base, const CounterStream& rng,
                  SignThreshold threshold, BitArray& children, BitArray* raw) {
  auto& out = children.words();
  const auto& in = parents.words();
  const std::size_t nwords = out.size();
  const std::uint64_t last_mask = tail_mask(children.size());

  for (std::size_t wd = 0; wd < nwords; ++wd) {
    std::uint64_t eps = minus_mask(rng, node_word_key(level, wd), threshold);
    if (wd + 1 == nwords) eps &= last_mask;

    std::uint64_t inherited = 0;
    if (base == 2) {
      // Children 64 wd .. 64 wd + 63 have parents 32 wd .. 32 wd + 31.
      inherited = spread_pairs(in[wd >> 1] >> (32 * (wd & 1)));
    } else {
      const std::size_t first = wd * 64;
      const std::size_t last = std::min(children.size(), first + 64);
      for (std::size_t c = first; c < last; ++c) {
        if (parents.get(c / static_cast<std::size_t>(base))) inherited |= std::uint64_t{1} << (c - first);
      }
    }
    out[wd] = (inherited ^ eps) & (wd + 1 == nwords ? last_mask : ~0ULL);
    if (raw != nullptr) raw->words()[wd] = eps;
  }
}

template <typename OnLevel>
void expand_tree(const CascadeParams& params, unsigned depth, std::uint64_t stream, bool keep_raw,
                 std::vector<BitArray>* raw_levels, OnLevel&& on_level, BitArray& result) {
  params.validate();
  checked_power(params.base, depth);
  const CounterStream rng(params.seed, stream);
  const SignThreshold threshold = SignThreshold::from_probability(epsilon_probabilities(params).plus);

  BitArray current(1);  // root: boldeps = +1
  on_level(0u, current);
  std::uint64_t width = 1;
  for (unsigned level = 1; level <= depth; ++level) {
    width *= static_cast<std::uint64_t>(params.base);
    BitArray next(width);
    BitArray raw;
    if (keep_raw) raw = BitArray(width);
    expand_level(current, level, params.base, rng, threshold, next, keep_raw ? &raw : nullptr);
    if (keep_raw) raw_levels->push_back(std::move(raw));
    current = std::move(next);
    on_level(level, current);
  }
  result = std::move(current);
}

}  // namespace

LeafSignField generate_leaf_signs(const CascadeParams& params, unsigned depth,
                                  const FieldOptions& options) {
  LeafSignField field;
  field.base = params.base;
  field.depth = depth;
  expand_tree(params, depth, options.stream, options.retain_levels, &field.raw_levels,
              [](unsigned, const BitArray&) {}, field.signs);
  return field;
}

std::vector<std::int64_t> level_sums(const CascadeParams& params, unsigned depth,
                                     std::uint64_t stream) {
  std::vector<std::int64_t> sums;
  sums.reserve(depth + 1);
  BitArray leaves;
  expand_tree(params, depth, stream, false, nullptr,
              [&](unsigned, const BitArray& level) {
                sums.push_back(static_cast<std::int64_t>(level.size()) -
                               2 * static_cast<std::int64_t>(level.count()));
              },
              leaves);
  return sums;
}

}  // namespace cascade
