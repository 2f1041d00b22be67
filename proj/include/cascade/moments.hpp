#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "cascade/params.hpp"
#include "cascade/scalar.hpp"

namespace cascade {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// ---------------------------------------------------------------------------
// Scalar-generic building blocks. Every recursion below works for double,
// SignedLog, boost::multiprecision floats and cpp_rational alike.
// ---------------------------------------------------------------------------

/// Sign-law constants of a cascade in a chosen scalar type.
template <typename Scalar>
struct CascadeCoefficients {
  int base = 2;
  Scalar weight{1};   // b^-H; 1 for the symmetric walk
  Scalar odd_eps{0};  // E(eps^q) for odd q: b^(H-1); 0 when symmetric
  Scalar p_plus{1};
  Scalar p_minus{0};

  Scalar eps_moment(unsigned q) const { return (q % 2 == 0) ? Scalar(1) : odd_eps; }
};

namespace detail {

template <typename Scalar>
inline constexpr bool uses_double_pow =
    std::is_same_v<Scalar, double> || std::is_same_v<Scalar, SignedLog>;

/// b^e for integer e, exact in exact scalar types.
template <typename Scalar>
Scalar integer_power(int base, long e) {
  const Scalar b(base);
  return e >= 0 ? ipow(b, static_cast<unsigned>(e)) : Scalar(1) / ipow(b, static_cast<unsigned>(-e));
}

template <typename Scalar>
Scalar real_power(int base, double e) {
  if (e == std::floor(e) && std::fabs(e) < 1024) return integer_power<Scalar>(base, static_cast<long>(e));
  if constexpr (uses_double_pow<Scalar>) {
    return Scalar(std::pow(static_cast<double>(base), e));
  } else if constexpr (std::numeric_limits<Scalar>::is_exact) {
    throw std::domain_error("b^H is irrational for non-integer H; use a floating scalar");
  } else {
    using std::pow;
    return pow(Scalar(base), Scalar(e));
  }
}

}  // namespace detail

/// True when b^-H and p+- are rational, i.e. integer H or the symmetric walk.
inline bool exact_rational_available(const CascadeParams& params) {
  if (params.hurst.is_symmetric()) return true;
  const double h = params.hurst.value();
  return h == std::floor(h);
}

template <typename Scalar>
CascadeCoefficients<Scalar> coefficients_as(const CascadeParams& params) {
  params.validate();
  CascadeCoefficients<Scalar> c;
  c.base = params.base;
  if (params.hurst.is_symmetric()) {
    c.weight = Scalar(1);
    c.odd_eps = Scalar(0);
    c.p_plus = Scalar(1) / Scalar(2);
    c.p_minus = c.p_plus;
    return c;
  }
  const double h = params.hurst.value();
  c.weight = detail::real_power<Scalar>(params.base, -h);
  c.odd_eps = detail::real_power<Scalar>(params.base, h - 1.0);
  c.p_plus = (Scalar(1) + c.odd_eps) / Scalar(2);
  c.p_minus = (Scalar(1) - c.odd_eps) / Scalar(2);
  return c;
}

/// Moments of sum_{j<b} eps_j Y_j for i.i.d. children with moments m (m[0] = 1)
/// via the multinomial expansion: q! times the b-fold Cauchy power of
/// a_k = E(eps^k) m_k / k!. Entries m[q] with q > max_order are ignored.
template <typename Scalar>
Vector<Scalar> children_sum_moments_multinomial(const Vector<Scalar>& m,
                                               const CascadeCoefficients<Scalar>& c) {
  const Eigen::Index Q = m.size() - 1;
  Vector<Scalar> a(Q + 1);
  for (Eigen::Index k = 0; k <= Q; ++k) {
    a(k) = c.eps_moment(static_cast<unsigned>(k)) * m(k) / factorial<Scalar>(static_cast<unsigned>(k));
  }
  Vector<Scalar> power = a;
  for (int child = 1; child < c.base; ++child) {
    Vector<Scalar> next(Q + 1);
    for (Eigen::Index q = 0; q <= Q; ++q) {
      Scalar s(0);
      for (Eigen::Index k = 0; k <= q; ++k) s = s + power(k) * a(q - k);
      next(q) = s;
    }
    power = next;
  }
  for (Eigen::Index q = 0; q <= Q; ++q) power(q) = power(q) * factorial<Scalar>(static_cast<unsigned>(q));
  return power;
}

/// Binary case written as the binomial expansion of (eps0 Y0 + eps1 Y1)^q:
///   2 E(eps^q) m_q + sum_{k=1}^{q-1} C(q,k) E(eps^k) E(eps^{q-k}) m_k m_{q-k}.
template <typename Scalar>
Vector<Scalar> children_sum_moments_binary(const Vector<Scalar>& m, const CascadeCoefficients<Scalar>& c) {
  const Eigen::Index Q = m.size() - 1;
  Vector<Scalar> out(Q + 1);
  out(0) = Scalar(1);
  for (Eigen::Index q = 1; q <= Q; ++q) {
    const auto uq = static_cast<unsigned>(q);
    Scalar s = Scalar(2) * c.eps_moment(uq) * m(q);
    for (unsigned k = 1; k < uq; ++k) {
      s = s + binomial<Scalar>(uq, k) * c.eps_moment(k) * c.eps_moment(uq - k) * m(k) * m(q - k);
    }
    out(q) = s;
  }
  return out;
}

template <typename Scalar>
Vector<Scalar> children_sum_moments(const Vector<Scalar>& m, const CascadeCoefficients<Scalar>& c) {
  return c.base == 2 ? children_sum_moments_binary(m, c) : children_sum_moments_multinomial(m, c);
}

/// E(Z_n^q) for n = 0..n_max, q = 0..q_max by forward recursion from Z_0 = 1:
///   E(Z_{n+1}^q) = b^(-qH) E[(sum_j eps_j Z_n(j))^q].
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> z_moments(const CascadeCoefficients<Scalar>& c,
                                                                unsigned n_max, unsigned q_max) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> table(n_max + 1, q_max + 1);
  Vector<Scalar> m(q_max + 1);
  for (unsigned q = 0; q <= q_max; ++q) m(q) = Scalar(1);
  table.row(0) = m.transpose();
  for (unsigned n = 1; n <= n_max; ++n) {
    Vector<Scalar> next = children_sum_moments(m, c);
    Scalar wq(1);
    for (unsigned q = 0; q <= q_max; ++q) {
      next(q) = next(q) * wq;
      wq = wq * c.weight;
    }
    m = next;
    table.row(n) = m.transpose();
  }
  return table;
}

/// Moments of a fixed point Y = w sum_j eps_j Y(j) given its first moment,
/// solved order by order:
///   E(Y^q) = w^q S_q / (1 - b w^q E(eps^q)),
/// S_q the cross terms in which no single child carries the full power q.
/// Requires b w^q E(eps^q) < 1 for q >= 2 (true for 1/2 < H <= 1).
template <typename Scalar>
Vector<Scalar> fixed_point_moments(const CascadeCoefficients<Scalar>& c, const Scalar& first,
                                   unsigned q_max) {
  Vector<Scalar> m(q_max + 1);
  for (unsigned q = 0; q <= q_max; ++q) m(q) = Scalar(0);
  m(0) = Scalar(1);
  if (q_max >= 1) m(1) = first;
  Scalar wq = c.weight;
  for (unsigned q = 2; q <= q_max; ++q) {
    wq = wq * c.weight;
    Vector<Scalar> head = m.head(q + 1);
    head(q) = Scalar(0);
    const Scalar cross = children_sum_moments(head, c)(q);
    m(q) = wq * cross / (Scalar(1) - Scalar(c.base) * wq * c.eps_moment(q));
  }
  return m;
}

/// Even moments of N(0,1) from the two-halves induction
///   M(2) = 1,  M(2p) = (2^p - 2)^-1 sum_{k=1}^{p-1} C(2p, 2k) M(2k) M(2p-2k).
/// Entry p-1 holds M(2p).
template <typename Scalar>
Vector<Scalar> gaussian_even_moments_as(unsigned p_max) {
  if (p_max < 1) throw std::invalid_argument("gaussian_even_moments: p_max must be >= 1");
  Vector<Scalar> M(p_max);
  M(0) = Scalar(1);
  for (unsigned p = 2; p <= p_max; ++p) {
    Scalar s(0);
    for (unsigned k = 1; k < p; ++k) s = s + binomial<Scalar>(2 * p, 2 * k) * M(k - 1) * M(p - k - 1);
    M(p - 1) = s / (ipow(Scalar(2), p) - Scalar(2));
  }
  return M;
}

/// Exhaustive expectation of Z_n^q over every sign assignment of the nodes
/// at generations 1..n, each weighted by p+^(#plus) p-^(#minus).
/// Throws CapacityError beyond 2^24 assignments.
template <typename Scalar>
Vector<Scalar> enumerate_z_moments(const CascadeCoefficients<Scalar>& c, unsigned n, unsigned q_max);

// ---------------------------------------------------------------------------
// Double-precision interface.
// ---------------------------------------------------------------------------

enum class EntryFlag : std::uint8_t {
  Finite,     // exact finite-n value
  Limit,      // n -> infinity value
  Overflow,   // magnitude beyond double range; see log_abs
  Undefined,  // row not defined (e.g. n = 0 at the critical point)
};

const char* to_string(EntryFlag f);

/// Table of moments indexed by (n, q), q = 0..q_max. Column 0 is E(.^0) = 1.
struct MomentTable {
  enum class Quantity { Z, NormalizedX };

  CascadeParams params;
  Quantity quantity = Quantity::Z;
  unsigned n_max = 0;
  unsigned q_max = 0;
  Eigen::MatrixXd values;    // (n_max + 1) x (q_max + 1)
  Eigen::MatrixXd log_abs;   // log|value|, finite even when value overflows
  std::vector<EntryFlag> flags;

  double at(unsigned n, unsigned q) const { return values(n, q); }
  EntryFlag flag(unsigned n, unsigned q) const { return flags[n * (q_max + 1) + q]; }
};

/// E(eps^q): b^(H-1) for odd q (0 when symmetric), 1 for even q.
double epsilon_moment(unsigned q, const CascadeParams& params);

/// Regime normalization constant: sigma_H (H > 1/2), sqrt(1 - 1/b) (H = 1/2),
/// sqrt(1 + (b-1)/(b^(2-2H) - b)) (H < 1/2), 1 (symmetric).
double sigma(const CascadeParams& params);

/// E(Z_n^q). q_max <= 16 for b = 2 and <= 10 for b >= 3. Computed in
/// log-magnitude arithmetic; entries beyond the double range are flagged.
MomentTable z_moment_recursion(const CascadeParams& params, unsigned n_max, unsigned q_max);

/// E(Z^q) for the limit Z, H in (1/2, 1]. Throws RegimeError otherwise.
Eigen::VectorXd limit_z_moments(const CascadeParams& params, unsigned q_max);

/// M(2), M(4), ..., M(2 p_max).
Eigen::VectorXd gaussian_even_moments(unsigned p_max);

/// M_n^(q) = E(X_n(1)^q) for H <= 1/2 from
///   Y_{n+1} = r_n b^(-1/2) sum_j eps_j Y_n(j),  r_n = sqrt(n/(n+1)) at H = 1/2, else 1.
/// Rows start at n = 0 (n = 1 at the critical point; row 0 flagged Undefined).
MomentTable normalized_moment_recursion(const CascadeParams& params, unsigned n_max, unsigned q_max);

/// E((B_H(1)/sigma_H)^q) for the convergent regime, solved order by order
/// with first moment 1/sigma_H.
Eigen::VectorXd tilde_moment_solver(const CascadeParams& params, unsigned q_max);

/// Exhaustive oracle: rows n = 0..n. Exact rational arithmetic when b^-H is
/// rational, 50-digit binary floats otherwise.
MomentTable brute_force_moments(const CascadeParams& params, unsigned n, unsigned q_max);

}  // namespace cascade

#include "cascade/moments_enumerate.ipp"
