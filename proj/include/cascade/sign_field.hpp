#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "cascade/params.hpp"
#include "cascade/rng.hpp"

namespace cascade {

/// Fixed-size packed bit vector. Bits past size() are kept clear.
class BitArray {
 public:
  BitArray() = default;
  explicit BitArray(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool v) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (v) words_[i >> 6] |= bit; else words_[i >> 6] &= ~bit;
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::vector<std::uint64_t>& words() { return words_; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  /// Number of set bits in [first, last).
  std::size_t count(std::size_t first, std::size_t last) const;
  std::size_t count() const { return count(0, size_); }

  friend bool operator==(const BitArray&, const BitArray&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Products boldeps(w) = eps(w_1) eps(w_1 w_2) ... eps(w_1...w_n) over every
/// generation-n node, ordered by left endpoint t_w = k b^-n.
/// Bit k set <=> boldeps = -1.
struct LeafSignField {
  int base = 2;
  unsigned depth = 0;
  BitArray signs;
  /// Raw eps(w) for |w| = 1..depth (index level-1); empty unless retained.
  std::vector<BitArray> raw_levels;

  std::size_t size() const { return signs.size(); }
  int sign(std::size_t k) const { return signs.get(k) ? -1 : 1; }
  bool has_levels() const { return raw_levels.size() == depth; }
  /// Sum of boldeps over the leaves [first, last).
  std::int64_t sum(std::size_t first, std::size_t last) const {
    return static_cast<std::int64_t>(last - first) - 2 * static_cast<std::int64_t>(signs.count(first, last));
  }
};

struct FieldOptions {
  /// RNG stream; replica r of a Monte-Carlo run uses stream r.
  std::uint64_t stream = 0;
  bool retain_levels = false;
};

/// Largest leaf count a single field may hold (512 MiB of packed bits).
inline constexpr std::uint64_t kMaxLeaves = std::uint64_t{1} << 32;

/// b^n, or throws CapacityError when it exceeds `limit`.
std::uint64_t checked_power(int base, unsigned n, std::uint64_t limit = kMaxLeaves);

/// Expands the tree level by level from the root (boldeps = +1) with two
/// ping-pong bit arrays. eps of node k at level l is lane k % 64 of
/// minus_mask(stream, node_word_key(l, k / 64), threshold), so the field is a
/// pure function of (seed, stream, base, H, depth).
LeafSignField generate_leaf_signs(const CascadeParams& params, unsigned depth,
                                  const FieldOptions& options = {});

/// sum_w boldeps(w) over each generation 0..depth of one tree, without storing
/// the leaves. Z_k = b^(-kH) * sums[k] for the same stream as
/// generate_leaf_signs.
std::vector<std::int64_t> level_sums(const CascadeParams& params, unsigned depth,
                                     std::uint64_t stream = 0);

}  // namespace cascade
