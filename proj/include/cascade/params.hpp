#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace cascade {

/// Raised when a requested construction does not fit the memory/work budget.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an operation is called outside the regime it is defined for.
struct RegimeError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Hurst parameter: a finite real H <= 1, or the fair-sign limit H = -inf.
///
/// The limit is kept as a distinct state so that p+ = 1/2 and sigma = 1 are
/// exact instead of the result of evaluating b^(H-1) at a huge negative H.
class Hurst {
 public:
  static Hurst finite(double h);
  static Hurst symmetric() { return Hurst{}; }

  bool is_symmetric() const { return symmetric_; }
  /// Finite value. Throws RegimeError for the symmetric sentinel.
  double value() const;

  std::string to_string() const;
  /// Accepts a decimal number or one of "sym", "symmetric", "-inf".
  static Hurst parse(const std::string& text);

  friend bool operator==(const Hurst&, const Hurst&) = default;

 private:
  Hurst() = default;
  explicit Hurst(double h) : symmetric_(false), value_(h) {}

  bool symmetric_ = true;
  double value_ = 0.0;
};

enum class Regime {
  Convergent,  // 1/2 < H <= 1
  Critical,    // H = 1/2
  Divergent,   // H < 1/2, finite
  Symmetric,   // H = -inf
};

const char* to_string(Regime r);

struct CascadeParams {
  int base = 2;
  Hurst hurst = Hurst::finite(0.7);
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when base < 2 or H > 1.
  void validate() const;

  /// b^-H, the magnitude of a single weight. The symmetric walk uses unit
  /// weights, so its raw paths are the plain +-1 random walk.
  double weight() const;
};

Regime regime_of(const CascadeParams& params);

struct SignProbabilities {
  double plus;
  double minus;
};

/// P(eps = +1) = (1 + b^(H-1)) / 2, P(eps = -1) = (1 - b^(H-1)) / 2.
SignProbabilities epsilon_probabilities(const CascadeParams& params);

}  // namespace cascade
