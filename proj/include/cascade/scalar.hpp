#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

#include <Eigen/Core>

namespace cascade {

/// Real number held as sign * exp(log_abs). Used where moments grow like
/// b^(nq(1/2-H)) and would overflow a double long before the recursion ends.
class SignedLog {
 public:
  SignedLog() = default;
  SignedLog(double x)  // NOLINT(google-explicit-constructor)
      : sign_(x > 0 ? 1 : (x < 0 ? -1 : 0)), log_abs_(x == 0 ? 0.0 : std::log(std::fabs(x))) {}
  SignedLog(int x) : SignedLog(static_cast<double>(x)) {}  // NOLINT

  static SignedLog from_log(int sign, double log_abs) {
    SignedLog r;
    r.sign_ = sign;
    r.log_abs_ = sign == 0 ? 0.0 : log_abs;
    return r;
  }

  int sign() const { return sign_; }
  double log_abs() const { return log_abs_; }
  /// +-inf when the magnitude exceeds the double range.
  double to_double() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_abs_); }

  friend SignedLog operator*(SignedLog a, SignedLog b) {
    return from_log(a.sign_ * b.sign_, a.log_abs_ + b.log_abs_);
  }
  friend SignedLog operator/(SignedLog a, SignedLog b) {
    return from_log(a.sign_ * b.sign_, a.log_abs_ - b.log_abs_);
  }
  friend SignedLog operator-(SignedLog a) { return from_log(-a.sign_, a.log_abs_); }
  friend SignedLog operator+(SignedLog a, SignedLog b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    if (a.log_abs_ < b.log_abs_) std::swap(a, b);
    const double ratio = std::exp(b.log_abs_ - a.log_abs_);
    if (a.sign_ == b.sign_) return from_log(a.sign_, a.log_abs_ + std::log1p(ratio));
    if (ratio == 1.0) return SignedLog{};
    return from_log(a.sign_, a.log_abs_ + std::log1p(-ratio));
  }
  friend SignedLog operator-(SignedLog a, SignedLog b) { return a + (-b); }
  SignedLog& operator+=(SignedLog o) { return *this = *this + o; }
  SignedLog& operator*=(SignedLog o) { return *this = *this * o; }

  friend bool operator==(SignedLog a, SignedLog b) {
    return a.sign_ == b.sign_ && (a.sign_ == 0 || a.log_abs_ == b.log_abs_);
  }
  friend std::ostream& operator<<(std::ostream& os, SignedLog x) { return os << x.to_double(); }

 private:
  int sign_ = 0;
  double log_abs_ = 0.0;
};

/// x^e by repeated squaring; exact for exact scalar types.
template <typename Scalar>
Scalar ipow(Scalar x, unsigned e) {
  Scalar result(1);
  while (e != 0) {
    if (e & 1U) result = result * x;
    x = x * x;
    e >>= 1;
  }
  return result;
}

/// Binomial coefficient as a Scalar; exact while it fits in 64 bits.
template <typename Scalar>
Scalar binomial(unsigned n, unsigned k) {
  if (k > n) return Scalar(0);
  std::uint64_t c = 1;
  for (unsigned i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return Scalar(static_cast<double>(c));
}

template <typename Scalar>
Scalar factorial(unsigned n) {
  Scalar r(1);
  for (unsigned i = 2; i <= n; ++i) r = r * Scalar(static_cast<int>(i));
  return r;
}

}  // namespace cascade

namespace Eigen {
template <>
struct NumTraits<cascade::SignedLog> : GenericNumTraits<cascade::SignedLog> {
  typedef cascade::SignedLog Real;
  typedef cascade::SignedLog NonInteger;
  typedef cascade::SignedLog Nested;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 2
  };
};
}  // namespace Eigen
