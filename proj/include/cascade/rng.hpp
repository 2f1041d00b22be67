#pragma once

#include <cstdint>

namespace cascade {

/// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// Random-access generator: value(c) is the c-th output of a SplitMix64
/// sequence whose starting state depends on (seed, stream).
///
///   base     = mix64(seed ^ mix64(stream + kGolden))
///   value(c) = mix64(base + (c + 1) * kGolden)
///
/// Any draw can be recomputed from its counter alone, so subtrees and
/// replicas regenerate identically whatever order they are visited in.
class CounterStream {
 public:
  constexpr CounterStream(std::uint64_t seed, std::uint64_t stream)
      : base_(mix64(seed ^ mix64(stream + kGolden))) {}

  constexpr std::uint64_t operator()(std::uint64_t counter) const {
    return mix64(base_ + (counter + 1) * kGolden);
  }

 private:
  std::uint64_t base_;
};

/// P(eps = +1) as a 64-bit fixed-point threshold: lane u (uniform on
/// [0, 2^64)) draws +1 iff u < threshold. Exact for every double in [1/2, 1).
struct SignThreshold {
  bool always_plus = false;
  std::uint64_t fixed = 0;

  static SignThreshold from_probability(double p_plus);
};

/// Counter key of the 64-lane word `word` at tree level `level`.
/// Layout: key = level << 40 | word; each key owns the 64 counters
/// key << 6 | step used by the bit-serial comparison below.
constexpr std::uint64_t node_word_key(unsigned level, std::uint64_t word) {
  return (static_cast<std::uint64_t>(level) << 40) | word;
}

/// 64 independent signs packed in a word; bit set <=> eps = -1.
///
/// Each lane compares a uniform 64-bit number, revealed one bit per step from
/// the most significant end, against the threshold. A lane is decided at the
/// first bit where it differs from the threshold, so the expected number of
/// generator calls per word is about log2(64) + 2 instead of 64.
inline std::uint64_t minus_mask(const CounterStream& rng, std::uint64_t key, SignThreshold t) {
  if (t.always_plus) return 0;
  std::uint64_t undecided = ~0ULL;
  std::uint64_t plus = 0;
  std::uint64_t remaining = t.fixed;
  for (unsigned step = 0; undecided != 0 && remaining != 0; ++step) {
    const std::uint64_t r = rng((key << 6) | step);
    if (remaining >> 63) {
      plus |= undecided & ~r;
      undecided &= r;
    } else {
      undecided &= ~r;
    }
    remaining <<= 1;
  }
  // Lanes still undecided equal the threshold on all its significant bits,
  // hence u >= threshold.
  return ~plus;
}

}  // namespace cascade
