#include <doctest.h>

#include <cmath>

#include "cascade/charfn.hpp"
#include "cascade/moments.hpp"
#include "cascade/sampling.hpp"
#include "cascade/stats.hpp"

using namespace cascade;

namespace {

CascadeParams make(double h, int b = 2) { return {b, Hurst::finite(h), 0}; }

}  // namespace

TEST_CASE("characteristic function basics") {
  for (int b : {2, 3}) {
    for (double h : {0.6, 0.7, 0.95}) {
      const auto params = make(h, b);
      CHECK(std::abs(charfn_at(params, 0.0, 60) - Complex(1.0, 0.0)) <= 1e-15);
      double worst_modulus = 0.0, worst_hermitian = 0.0;
      for (double t = -50.0; t <= 50.0; t += 0.37) {
        const auto [plus, minus] = charfn_pair(params, t, 60);
        worst_modulus = std::max(worst_modulus, std::abs(plus));
        worst_hermitian = std::max(worst_hermitian, std::abs(minus - std::conj(plus)));
      }
      CHECK(worst_modulus <= 1.0 + 1e-12);
      CHECK(worst_hermitian <= 1e-12);
    }
  }
  SUBCASE("H = 1 gives exp(it)") {
    for (double t : {-7.0, 0.5, 3.0, 40.0})
      CHECK(std::abs(charfn_at(make(1.0), t, 30) - std::polar(1.0, t)) <= 1e-12);
  }
  SUBCASE("depth 0 is exp(it)") { CHECK(std::abs(charfn_at(make(0.7), 2.0, 0) - std::polar(1.0, 2.0)) <= 1e-15); }
  CHECK_THROWS_AS(charfn_at(make(0.5), 1.0, 10), RegimeError);
  CHECK_THROWS_AS(charfn_at(make(0.3), 1.0, 10), RegimeError);
}

TEST_CASE("depth convergence") {
  const auto params = make(0.7);
  SUBCASE("converged depths agree") {
    CHECK(std::abs(charfn_at(params, 1.0, 90) - charfn_at(params, 1.0, 100)) <= 1e-8);
  }
  SUBCASE("shallow depths still carry the O(2^(n(1-2H))) error") {
    // Reported, not asserted: at t = 1 the depth-30 and depth-40 values differ by ~7e-5.
    const double gap = std::abs(charfn_at(params, 1.0, 30) - charfn_at(params, 1.0, 40));
    MESSAGE("|phi_30(1) - phi_40(1)| = " << gap);
    CHECK(gap < 1e-3);
  }
  SUBCASE("select_depth") {
    const auto sel = select_depth(params, 64.0);
    CHECK(sel.converged);
    CHECK(sel.gap <= 1e-10);
    CHECK(sel.depth >= 48);
  }
}

TEST_CASE("one application of the functional equation maps phi_n to phi_{n+1}") {
  for (int b : {2, 3}) {
    for (double h : {0.6, 0.7, 0.95}) {
      const auto params = make(h, b);
      const auto [p_plus, p_minus] = epsilon_probabilities(params);
      const double w = params.weight();
      for (unsigned n : {3U, 10U, 40U, 200U}) {
        double worst = 0.0;
        for (double t = -30.0; t <= 30.0; t += 0.73) {
          const Complex g = p_plus * charfn_at(params, w * t, n) + p_minus * charfn_at(params, -w * t, n);
          Complex rhs = g;
          for (int j = 1; j < b; ++j) rhs *= g;
          worst = std::max(worst, std::abs(charfn_at(params, t, n + 1) - rhs));
        }
        CHECK_MESSAGE(worst <= 1e-14, "b=" << b << " H=" << h << " n=" << n << " worst=" << worst);
      }
    }
  }
}

TEST_CASE("derivatives at zero give the moments") {
  for (double h : {0.7, 0.95}) {
    const auto params = make(h);
    const auto lim = limit_z_moments(params, 2);
    const double d = 1e-3;
    const Complex up = charfn_at(params, d, 200), down = charfn_at(params, -d, 200);
    const Complex first = (up - down) / (2.0 * d);
    const Complex second = (up + down - 2.0) / (d * d);
    CHECK(first.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::fabs(first.imag() - lim(1)) <= 1e-5);
    CHECK(std::fabs(-second.real() - lim(2)) <= 1e-5);
  }
}

TEST_CASE("density of Z") {
  const auto params = make(0.7);
  const auto d = density_of_Z(params);
  CHECK(d.depth.converged);
  CHECK(d.tail_negligible);
  CHECK(d.tail_max <= 1e-12);
  CHECK(std::fabs(d.mass - 1.0) <= 1e-6);
  CHECK(std::fabs(d.mean - 1.0) <= 1e-4);
  CHECK(std::fabs(d.second_moment - 2.0649064800633346865) <= 1e-3);
  CHECK(d.max_imag_residue <= 1e-10);
  CHECK(d.density.minCoeff() >= -1e-6);
  CHECK(d.cdf(d.x(0) - 1.0) == 0.0);
  CHECK(d.cdf(d.x(d.x.size() - 1) + 1.0) == 1.0);

  SUBCASE("CDF agrees with sampled Z_16") {
    const Eigen::VectorXd z = sample_terminal({2, Hurst::finite(0.7), 11}, 16, 20000);
    const double ks = ks_statistic(z, [&](double v) { return d.cdf(v); });
    MESSAGE("KS(Z_16 draws, density CDF) = " << ks);
    CHECK(ks <= 0.02);
  }
  SUBCASE("other H") {
    const auto d95 = density_of_Z(make(0.95));
    CHECK(std::fabs(d95.mass - 1.0) <= 1e-6);
    CHECK(std::fabs(d95.mean - 1.0) <= 1e-4);
  }
  CHECK_THROWS_AS(density_of_Z(make(0.5)), RegimeError);
  CHECK_THROWS_AS(density_of_Z(make(1.0)), std::domain_error);
}

TEST_CASE("decay fit") {
  for (double h : {0.7, 0.95}) {
    const auto fit = decay_fit(make(h));
    MESSAGE("H=" << h << " rho=" << fit.rho << " R2=" << fit.r_squared);
    CHECK(fit.rho > 0.0);
    CHECK(fit.rho < 1.0);
    CHECK(fit.points >= 8);
    if (h == 0.95) CHECK(fit.r_squared > 0.9);
  }
}
