#include <doctest.h>

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

#include "cascade/moments.hpp"
#include "oracles.hpp"

using namespace cascade;
using boost::multiprecision::cpp_rational;

namespace {

CascadeParams make(double h, int b = 2) { return {b, Hurst::finite(h), 0}; }

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

// Closed form of E(Z_n^2): with a = b^(1-2H) and c = (b-1)/b,
// m_{n+1} = a m_n + c, m_0 = 1.
double second_moment_closed(int b, double h, unsigned n) {
  const double a = std::pow(static_cast<double>(b), 1.0 - 2.0 * h);
  const double c = (b - 1.0) / b;
  if (a == 1.0) return 1.0 + n * c;
  return std::pow(a, n) + c * (std::pow(a, n) - 1.0) / (a - 1.0);
}

}  // namespace

TEST_CASE("epsilon moments and sigma constants") {
  CHECK(epsilon_moment(2, make(0.7)) == 1.0);
  CHECK(epsilon_moment(1, make(0.7)) == doctest::Approx(0.81225239635623552886).epsilon(1e-15));
  CHECK(epsilon_moment(3, make(0.7)) == doctest::Approx(0.81225239635623552886).epsilon(1e-15));
  CHECK(epsilon_moment(1, {2, Hurst::symmetric(), 0}) == 0.0);
  CHECK(epsilon_moment(1, make(1.0)) == 1.0);

  CHECK(sigma(make(0.7)) == doctest::Approx(1.436978246203934253).epsilon(1e-14));
  CHECK(sigma(make(0.5)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(sigma(make(0.5, 3)) == doctest::Approx(0.81649658092772603273).epsilon(1e-15));
  CHECK(sigma(make(-2.0)) == doctest::Approx(1.00803225754837058).epsilon(1e-15));
  CHECK(sigma({2, Hurst::symmetric(), 0}) == 1.0);
  CHECK(sigma(make(1.0)) == 1.0);
}

TEST_CASE("first moment is one at every depth") {
  for (int b : {2, 3, 5}) {
    for (double h : {1.0, 0.7, 0.5, 0.3, -2.0}) {
      const auto t = z_moment_recursion(make(h, b), 30, 2);
      for (unsigned n = 0; n <= 30; ++n) CHECK(t.at(n, 1) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("second moments against the closed form") {
  for (int b : {2, 3}) {
    for (double h : {0.95, 0.7, 0.5, 0.3, 0.0}) {
      const auto t = z_moment_recursion(make(h, b), 40, 4);
      double worst = 0.0;
      for (unsigned n = 0; n <= 40; ++n) worst = std::max(worst, rel(t.at(n, 2), second_moment_closed(b, h, n)));
      CHECK_MESSAGE(worst <= 1e-12, "b=" << b << " H=" << h);
    }
  }
}

TEST_CASE("frozen values, b = 3, H = 0.7") {
  const double expected[3][6] = {
      {1, 1.3110606816439209172, 1.7258082571691488067, 2.4008885418726340324, 3.2917580598552459961,
       4.6126510717548934339},
      {1, 1.511506323190008609, 2.282601705908281284, 3.8748126585583160305, 6.55044175676473206,
       11.761834822864355816},
      {1, 1.6406722949305835779, 2.660531771371445082, 5.0398406584529407257, 9.5255239181174410843,
       19.620333435606184045},
  };
  const auto rec = z_moment_recursion(make(0.7, 3), 3, 6);
  // 3 + 9 + 27 nodes at n = 3 is past the enumeration budget.
  const auto brute = brute_force_moments(make(0.7, 3), 2, 6);
  for (unsigned n = 1; n <= 3; ++n) {
    for (unsigned q = 1; q <= 6; ++q) {
      CHECK(rel(rec.at(n, q), expected[n - 1][q - 1]) <= 1e-12);
      if (n <= 2) CHECK(rel(brute.at(n, q), expected[n - 1][q - 1]) <= 1e-12);
    }
  }
}

TEST_CASE("frozen values, b = 2") {
  SUBCASE("H = 1/2, n <= 4") {
    const double expected[4][4] = {{1, 1.5, 2, 3}, {1, 2, 3.25, 6.875}, {1, 2.5, 4.625, 12.6875},
                                   {1, 3, 6.0625, 20.34375}};
    const auto t = z_moment_recursion(make(0.5), 4, 4);
    for (unsigned n = 1; n <= 4; ++n)
      for (unsigned q = 1; q <= 4; ++q) CHECK(rel(t.at(n, q), expected[n - 1][q - 1]) <= 1e-13);
  }
  SUBCASE("H = 0.7, n = 3") {
    const double expected[6] = {1, 1.6013790120249203419, 2.4115435616594021635, 4.2170633039654804256,
                                7.0157356403092336239, 12.799542751079115488};
    const auto t = z_moment_recursion(make(0.7), 3, 6);
    for (unsigned q = 1; q <= 6; ++q) CHECK(rel(t.at(3, q), expected[q - 1]) <= 1e-12);
  }
  SUBCASE("H = -2, n = 2, exact") {
    const cpp_rational expected[6] = {cpp_rational(1),       cpp_rational(2081, 2),  cpp_rational(2584),
                                      cpp_rational(2689408), cpp_rational(9035776),  cpp_rational(9405595648LL)};
    const auto c = coefficients_as<cpp_rational>(make(-2.0));
    const auto exact = z_moments(c, 2, 6);
    const auto enumerated = enumerate_z_moments(c, 2, 6);
    for (unsigned q = 1; q <= 6; ++q) {
      CHECK(exact(2, q) == expected[q - 1]);
      CHECK(enumerated(q) == expected[q - 1]);
    }
    const auto t = z_moment_recursion(make(-2.0), 2, 6);
    for (unsigned q = 1; q <= 6; ++q) CHECK(rel(t.at(2, q), expected[q - 1].convert_to<double>()) <= 1e-12);
  }
}

TEST_CASE("recursion agrees with exhaustive enumeration") {
  for (int b : {2, 3}) {
    for (double h : {-2.0, 0.3, 0.5, 0.7, 0.95}) {
      const unsigned n = b == 2 ? 3 : 2;
      const auto params = make(h, b);
      const auto rec = z_moment_recursion(params, n, 6);
      const auto brute = brute_force_moments(params, n, 6);
      double worst = 0.0;
      for (unsigned k = 0; k <= n; ++k)
        for (unsigned q = 0; q <= 6; ++q) worst = std::max(worst, rel(rec.at(k, q), brute.at(k, q)));
      CHECK_MESSAGE(worst <= 1e-10, "b=" << b << " H=" << h);
    }
  }
  SUBCASE("symmetric") {
    const CascadeParams params{2, Hurst::symmetric(), 0};
    const auto rec = z_moment_recursion(params, 3, 6);
    const auto brute = brute_force_moments(params, 3, 6);
    for (unsigned q = 0; q <= 6; ++q) CHECK(rel(rec.at(3, q), brute.at(3, q)) <= 1e-12);
    // The +-1 walk with 8 steps: E S^2 = 8, E S^4 = 3*64 - 2*8.
    CHECK(rec.at(3, 2) == doctest::Approx(8.0));
    CHECK(rec.at(3, 4) == doctest::Approx(176.0));
    CHECK(rec.at(3, 3) == 0.0);
  }
  SUBCASE("capacity") { CHECK_THROWS_AS(brute_force_moments(make(0.7), 5, 4), CapacityError); }
}

TEST_CASE("multinomial and binomial children sums agree") {
  const auto c = coefficients_as<double>(make(0.7));
  Vector<double> m(7);
  m << 1, 1, 2.0, 3.5, 6.0, 11.0, 21.0;
  const auto a = children_sum_moments_binary(m, c);
  const auto b = children_sum_moments_multinomial(m, c);
  for (Eigen::Index q = 0; q < 7; ++q) CHECK(a(q) == doctest::Approx(b(q)).epsilon(1e-13));
}

TEST_CASE("q caps and overflow flags") {
  CHECK_THROWS_AS(z_moment_recursion(make(0.7), 4, 17), std::invalid_argument);
  CHECK_THROWS_AS(z_moment_recursion(make(0.7, 3), 4, 11), std::invalid_argument);
  CHECK_NOTHROW(z_moment_recursion(make(0.7, 3), 4, 10));

  const auto t = z_moment_recursion(make(-2.0), 40, 16);
  CHECK(t.flag(40, 16) == EntryFlag::Overflow);
  CHECK(std::isfinite(t.log_abs(40, 16)));
  CHECK(t.flag(2, 6) == EntryFlag::Finite);
  // log-magnitude of the second moment still matches the closed form.
  CHECK(t.log_abs(40, 2) == doctest::Approx(std::log(second_moment_closed(2, -2.0, 40))).epsilon(1e-12));
}

TEST_CASE("limit moments, convergent regime") {
  const auto lim = limit_z_moments(make(0.7), 8);
  CHECK(lim(0) == 1.0);
  CHECK(lim(1) == 1.0);
  CHECK(lim(2) == doctest::Approx(2.0649064800633346865).epsilon(1e-14));
  SUBCASE("finite-n tables converge to the limit") {
    const auto t = z_moment_recursion(make(0.7), 400, 8);
    for (unsigned q = 1; q <= 8; ++q) CHECK(rel(t.at(400, q), lim(q)) <= 1e-10);
  }
  SUBCASE("H = 1 gives Z = 1") {
    const auto one = limit_z_moments(make(1.0), 6);
    for (Eigen::Index q = 0; q <= 6; ++q) CHECK(one(q) == doctest::Approx(1.0));
  }
  SUBCASE("other base") {
    const auto t = z_moment_recursion(make(0.8, 3), 300, 6);
    const auto l3 = limit_z_moments(make(0.8, 3), 6);
    for (unsigned q = 1; q <= 6; ++q) CHECK(rel(t.at(300, q), l3(q)) <= 1e-10);
  }
  CHECK_THROWS_AS(limit_z_moments(make(0.5), 4), RegimeError);
  CHECK_THROWS_AS(limit_z_moments(make(0.3), 4), RegimeError);
}

TEST_CASE("tilde moments") {
  const auto tilde = tilde_moment_solver(make(0.7), 8);
  const auto lim = limit_z_moments(make(0.7), 8);
  const double s = sigma(make(0.7));
  CHECK(tilde(1) == doctest::Approx(0.69590475892150783666).epsilon(1e-14));
  CHECK(tilde(2) == doctest::Approx(1.0).epsilon(1e-14));
  for (Eigen::Index q = 0; q <= 8; ++q) {
    CHECK(rel(tilde(q), lim(q) * std::pow(s, -static_cast<double>(q))) <= 1e-12);
  }
  CHECK_THROWS_AS(tilde_moment_solver(make(0.5), 4), RegimeError);
}

TEST_CASE("Gaussian even moments") {
  SUBCASE("double") {
    const auto g = gaussian_even_moments(8);
    for (unsigned p = 1; p <= 8; ++p) CHECK(g(p - 1) == doctest::Approx(oracle::double_factorial_odd(p)).epsilon(1e-14));
  }
  SUBCASE("rational induction is exact") {
    const auto g = gaussian_even_moments_as<cpp_rational>(12);
    for (unsigned p = 1; p <= 12; ++p) CHECK(g(p - 1) == cpp_rational(static_cast<long long>(oracle::double_factorial_odd(p))));
  }
  CHECK_THROWS_AS(gaussian_even_moments(0), std::invalid_argument);
}

TEST_CASE("normalized moments") {
  SUBCASE("critical second moment is 1 + 2/n and decreasing") {
    const auto t = normalized_moment_recursion(make(0.5), 200, 4);
    CHECK(t.flag(0, 2) == EntryFlag::Undefined);
    double prev = t.at(4, 2);
    bool decreasing = true;
    for (unsigned n = 1; n <= 200; ++n) {
      CHECK(t.at(n, 2) == doctest::Approx(1.0 + 2.0 / n).epsilon(1e-12));
      if (n > 4) {
        decreasing = decreasing && t.at(n, 2) < prev;
        prev = t.at(n, 2);
      }
    }
    CHECK(decreasing);
    // Third moment shrinks in magnitude for large n.
    CHECK(std::fabs(t.at(200, 3)) < std::fabs(t.at(100, 3)));
    CHECK(std::fabs(t.at(100, 3)) < std::fabs(t.at(50, 3)));
  }
  SUBCASE("agrees with E(Z_n^q) / divisor^q") {
    for (double h : {0.5, 0.3, -2.0}) {
      const auto params = make(h);
      const auto norm = normalized_moment_recursion(params, 12, 6);
      const auto raw = z_moment_recursion(params, 12, 6);
      const double s = sigma(params);
      for (unsigned n = 1; n <= 12; ++n) {
        const double a = h == 0.5 ? std::sqrt(static_cast<double>(n)) : std::pow(2.0, n * (0.5 - h));
        for (unsigned q = 1; q <= 6; ++q) {
          CHECK(rel(norm.at(n, q), raw.at(n, q) / std::pow(s * a, q)) <= 1e-11);
        }
      }
    }
  }
  SUBCASE("divergent regime approaches Gaussian moments") {
    const auto t = normalized_moment_recursion(make(0.3), 200, 8);
    const auto g = gaussian_even_moments(4);
    for (unsigned p = 1; p <= 4; ++p) CHECK(rel(t.at(200, 2 * p), g(p - 1)) <= 1e-6);
    CHECK(std::fabs(t.at(200, 1)) <= 1e-6);
  }
  SUBCASE("symmetric walk") {
    const auto t = normalized_moment_recursion({2, Hurst::symmetric(), 0}, 30, 4);
    for (unsigned n = 0; n <= 30; ++n) CHECK(t.at(n, 2) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(normalized_moment_recursion(make(0.7), 4, 4), RegimeError);
}
