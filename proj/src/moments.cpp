#include "cascade/moments.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace cascade {

namespace mp = boost::multiprecision;

const char* to_string(EntryFlag f) {
  switch (f) {
    case EntryFlag::Finite: return "finite";
    case EntryFlag::Limit: return "limit";
    case EntryFlag::Overflow: return "overflow";
    case EntryFlag::Undefined: return "undefined";
  }
  return "unknown";
}

double epsilon_moment(unsigned q, const CascadeParams& params) {
  return coefficients_as<double>(params).eps_moment(q);
}

double sigma(const CascadeParams& params) {
  const double b = params.base;
  switch (regime_of(params)) {
    case Regime::Symmetric:
      return 1.0;
    case Regime::Critical:
      return std::sqrt(1.0 - 1.0 / b);
    case Regime::Divergent: {
      const double h = params.hurst.value();
      return std::sqrt(1.0 + (b - 1.0) / (std::pow(b, 2.0 - 2.0 * h) - b));
    }
    case Regime::Convergent: {
      const double h = params.hurst.value();
      return std::sqrt(b - 1.0) / std::sqrt(b - std::pow(b, 2.0 - 2.0 * h));
    }
  }
  return 1.0;
}

namespace {

void check_q_max(const CascadeParams& params, unsigned q_max) {
  const unsigned cap = params.base == 2 ? 16 : 10;
  if (q_max < 1 || q_max > cap) {
    throw std::invalid_argument("q_max must lie in [1, " + std::to_string(cap) + "] for base " +
                                std::to_string(params.base));
  }
}

MomentTable make_table(const CascadeParams& params, MomentTable::Quantity quantity, unsigned n_max,
                       unsigned q_max) {
  MomentTable t;
  t.params = params;
  t.quantity = quantity;
  t.n_max = n_max;
  t.q_max = q_max;
  t.values = Eigen::MatrixXd::Zero(n_max + 1, q_max + 1);
  t.log_abs = Eigen::MatrixXd::Zero(n_max + 1, q_max + 1);
  t.flags.assign(static_cast<std::size_t>(n_max + 1) * (q_max + 1), EntryFlag::Finite);
  return t;
}

void store(MomentTable& t, unsigned n, unsigned q, double value) {
  t.values(n, q) = value;
  t.log_abs(n, q) = value == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::fabs(value));
  t.flags[n * (t.q_max + 1) + q] = std::isfinite(value) ? EntryFlag::Finite : EntryFlag::Overflow;
}

}  // namespace

MomentTable z_moment_recursion(const CascadeParams& params, unsigned n_max, unsigned q_max) {
  check_q_max(params, q_max);
  const auto logs = z_moments(coefficients_as<SignedLog>(params), n_max, q_max);
  MomentTable t = make_table(params, MomentTable::Quantity::Z, n_max, q_max);
  for (unsigned n = 0; n <= n_max; ++n) {
    for (unsigned q = 0; q <= q_max; ++q) {
      const SignedLog v = logs(n, q);
      t.values(n, q) = v.to_double();
      t.log_abs(n, q) = v.sign() == 0 ? -std::numeric_limits<double>::infinity() : v.log_abs();
      t.flags[n * (q_max + 1) + q] = std::isfinite(t.values(n, q)) ? EntryFlag::Finite : EntryFlag::Overflow;
    }
  }
  return t;
}

Eigen::VectorXd limit_z_moments(const CascadeParams& params, unsigned q_max) {
  if (regime_of(params) != Regime::Convergent) {
    throw RegimeError("limit moments of Z exist only for 1/2 < H <= 1");
  }
  check_q_max(params, q_max);
  return fixed_point_moments(coefficients_as<double>(params), 1.0, q_max);
}

Eigen::VectorXd gaussian_even_moments(unsigned p_max) { return gaussian_even_moments_as<double>(p_max); }

MomentTable normalized_moment_recursion(const CascadeParams& params, unsigned n_max, unsigned q_max) {
  const Regime regime = regime_of(params);
  if (regime == Regime::Convergent) {
    throw RegimeError("normalized moments X_n are defined for H <= 1/2");
  }
  check_q_max(params, q_max);
  const bool critical = regime == Regime::Critical;
  if (critical && n_max < 1) throw std::invalid_argument("critical normalization needs n_max >= 1");

  const auto c = coefficients_as<double>(params);
  const double s = sigma(params);
  MomentTable t = make_table(params, MomentTable::Quantity::NormalizedX, n_max, q_max);

  // Initial row: X_0(1) = 1/sigma, or X_1(1) = Z_1/sigma at the critical point.
  const unsigned n0 = critical ? 1 : 0;
  Vector<double> m(q_max + 1);
  if (critical) {
    const auto z = z_moments(c, 1, q_max);
    for (unsigned q = 0; q <= q_max; ++q) m(q) = z(1, q) / std::pow(s, q);
    for (unsigned q = 0; q <= q_max; ++q) {
      t.values(0, q) = std::numeric_limits<double>::quiet_NaN();
      t.log_abs(0, q) = std::numeric_limits<double>::quiet_NaN();
      t.flags[q] = EntryFlag::Undefined;
    }
  } else {
    for (unsigned q = 0; q <= q_max; ++q) m(q) = std::pow(s, -static_cast<double>(q));
  }
  for (unsigned q = 0; q <= q_max; ++q) store(t, n0, q, m(q));

  const double inv_sqrt_b = 1.0 / std::sqrt(static_cast<double>(params.base));
  for (unsigned n = n0; n < n_max; ++n) {
    const double r = critical ? std::sqrt(static_cast<double>(n) / static_cast<double>(n + 1)) : 1.0;
    Vector<double> next = children_sum_moments(m, c);
    double factor = 1.0;
    for (unsigned q = 0; q <= q_max; ++q) {
      next(q) *= factor;
      factor *= r * inv_sqrt_b;
    }
    m = next;
    for (unsigned q = 0; q <= q_max; ++q) store(t, n + 1, q, m(q));
  }
  return t;
}

Eigen::VectorXd tilde_moment_solver(const CascadeParams& params, unsigned q_max) {
  if (regime_of(params) != Regime::Convergent) {
    throw RegimeError("B_H / sigma_H is defined for 1/2 < H <= 1");
  }
  check_q_max(params, q_max);
  return fixed_point_moments(coefficients_as<double>(params), 1.0 / sigma(params), q_max);
}

MomentTable brute_force_moments(const CascadeParams& params, unsigned n, unsigned q_max) {
  check_q_max(params, q_max);
  MomentTable t = make_table(params, MomentTable::Quantity::Z, n, q_max);
  for (unsigned level = 0; level <= n; ++level) {
    if (exact_rational_available(params)) {
      const auto m = enumerate_z_moments(coefficients_as<mp::cpp_rational>(params), level, q_max);
      for (unsigned q = 0; q <= q_max; ++q) store(t, level, q, m(q).convert_to<double>());
    } else {
      const auto m = enumerate_z_moments(coefficients_as<mp::cpp_bin_float_50>(params), level, q_max);
      for (unsigned q = 0; q <= q_max; ++q) store(t, level, q, m(q).convert_to<double>());
    }
  }
  return t;
}

}  // namespace cascade
