#include <doctest.h>

#include <cmath>
#include <random>

#include "cascade/moments.hpp"
#include "cascade/stats.hpp"

using namespace cascade;

namespace {

CascadeParams make(double h, std::uint64_t seed = 0, int b = 2) { return {b, Hurst::finite(h), seed}; }

Eigen::VectorXd normal_draws(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (auto& v : x) v = dist(gen);
  return x;
}

}  // namespace

TEST_CASE("normal CDF") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-15));
  CHECK(normal_cdf(-8.0) == doctest::Approx(6.220960574271785e-16).epsilon(1e-12));
  CHECK(normal_cdf(-37.0) > 0.0);
}

TEST_CASE("KS statistic") {
  SUBCASE("single point at the median") {
    Eigen::VectorXd x(1);
    x << 0.0;
    CHECK(ks_statistic(x) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("constant samples") {
    for (double c : {-2.0, 0.3, 5.0}) {
      const Eigen::VectorXd x = Eigen::VectorXd::Constant(100, c);
      CHECK(ks_statistic(x) >= 0.5);
      CHECK(ks_statistic(x) == doctest::Approx(std::max(normal_cdf(c), 1.0 - normal_cdf(c))));
    }
  }
  SUBCASE("two points by hand") {
    Eigen::VectorXd x(2);
    x << 1.0, -1.0;  // unsorted on purpose
    const double f = normal_cdf(-1.0);
    CHECK(ks_statistic(x) == doctest::Approx(std::max(f, 0.5 - f)).epsilon(1e-14));
  }
  SUBCASE("custom CDF") {
    Eigen::VectorXd x(4);
    x << 0.125, 0.375, 0.625, 0.875;
    CHECK(ks_statistic(x, [](double v) { return std::clamp(v, 0.0, 1.0); }) == doctest::Approx(0.125));
  }
  SUBCASE("calibration on normal draws: D < 1.63 / sqrt(N) in >= 95% of runs") {
    const std::size_t n = 4000;
    int below = 0;
    for (std::uint64_t run = 0; run < 100; ++run) below += ks_statistic(normal_draws(n, run)) < 1.63 / std::sqrt(n);
    MESSAGE(below << "/100 runs below the 1% critical value");
    CHECK(below >= 95);
  }
  SUBCASE("power against a shifted normal") {
    Eigen::VectorXd x = normal_draws(4000, 9).array() + 0.2;
    CHECK(ks_statistic(x) > 0.05);
  }
}

TEST_CASE("sample moments and z-scores") {
  Eigen::VectorXd x(4);
  x << 1.0, 2.0, 3.0, 4.0;
  const auto m2 = sample_moment(x, 2);
  CHECK(m2.value == doctest::Approx(7.5));
  // sd of {1, 4, 9, 16} with N - 1 = 3, divided by sqrt(4).
  CHECK(m2.standard_error == doctest::Approx(std::sqrt(((6.5 * 6.5) + (3.5 * 3.5) + (1.5 * 1.5) + (8.5 * 8.5)) / 3.0) / 2.0));
  CHECK(z_score(1.0, 1.0, 0.0) == 0.0);
  CHECK(z_score(3.0, 1.0, 0.5) == 4.0);
  CHECK(std::isinf(z_score(1.5, 1.0, 0.0)));
  CHECK(z_score(1.0 + 1e-15, 1.0, 0.0) == 0.0);
}

TEST_CASE("StatReport bookkeeping") {
  StatReport r;
  r.record("info", 3.0);
  CHECK(r.pass);
  r.check("a", 0.5, 1.0);
  CHECK(r.pass);
  r.check("b", 2.0, 1.0);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.evaluate());
  StatReport n;
  n.check("nan", std::nan(""), 1.0);
  CHECK_FALSE(n.pass);
}

TEST_CASE("empirical moments against the exact tables") {
  SUBCASE("b = 2, H = 1/2, n = 10: E Z^2 = 6") {
    const auto r = empirical_vs_exact_moments(make(0.5, 3), 10, 100000, 4);
    CHECK(r.statistics.at("exact_q2") == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(r.pass);
    CHECK(std::fabs(r.statistics.at("moment_q2") - 6.0) <= 4.0 * std::sqrt(6.0 * 6.0 * 2.0 / 100000) * 2.0);
  }
  SUBCASE("b = 3, H = 0.7, n = 6") {
    const auto r = empirical_vs_exact_moments(make(0.7, 4, 3), 6, 100000, 4);
    CHECK(r.pass);
    for (unsigned q = 1; q <= 4; ++q) CHECK(r.statistics.at("abs_z_q" + std::to_string(q)) <= 4.0);
  }
  SUBCASE("H = 1 is exact") {
    const auto r = empirical_vs_exact_moments(make(1.0), 8, 100, 4);
    CHECK(r.pass);
    CHECK(r.statistics.at("moment_q4") == 1.0);
    CHECK(r.statistics.at("abs_z_q4") == 0.0);
  }
  SUBCASE("a wrong target is rejected") {
    // Z_4 draws checked as if they came from depth 12 (E Z^2: 3 vs 7 at H = 1/2).
    const auto r4 = empirical_vs_exact_moments(make(0.5, 5), 4, 20000, 2);
    const auto t12 = z_moment_recursion(make(0.5), 12, 2);
    CHECK(std::fabs(r4.statistics.at("moment_q2") - t12.at(12, 2)) > 3.0);
  }
}

TEST_CASE("terminal CLT harness") {
  SUBCASE("symmetric walk passes and is deterministic") {
    const CascadeParams params{2, Hurst::symmetric(), 2};
    const auto a = clt_terminal_test(params, {6, 10}, 4000);
    const auto b = clt_terminal_test(params, {6, 10}, 4000);
    CHECK(a.statistics == b.statistics);
    CHECK(a.thresholds.at("D_final") == 0.05);
    CHECK(a.statistics.at("abs_z_q2_n10") <= 4.0);
  }
  SUBCASE("critical threshold default") {
    const auto r = clt_terminal_test(make(0.5, 1), {6}, 500);
    CHECK(r.thresholds.at("D_final") == 0.08);
  }
  SUBCASE("negative control: n = 2 is far from Gaussian") {
    const auto r = clt_terminal_test(make(0.3, 1), {2}, 4000);
    CHECK_FALSE(r.pass);
    CHECK(r.statistics.at("D_final") > 0.1);
  }
  CHECK_THROWS_AS(clt_terminal_test(make(0.7), {8}, 100), RegimeError);
}

TEST_CASE("small-H harness with automatic depth") {
  const auto r = clt_smallH_test(make(0.0, 6), {0.9, 0.8}, 0, 2000);
  MESSAGE("n(0.9)=" << r.statistics.at("n_H0.9") << " n(0.8)=" << r.statistics.at("n_H0.8"));
  CHECK(r.statistics.at("abs_z_second_moment_H0.8") <= 4.0);
  CHECK(r.statistics.at("abs_z_mean_H0.8") <= 4.0);
  CHECK(std::fabs(r.statistics.at("finite_n_second_moment_H0.8") - 1.0) <= 1e-3);
  CHECK(r.statistics.at("D_H0.8") < r.statistics.at("D_H0.9"));
  CHECK_THROWS_AS(clt_smallH_test(make(0.0), {0.5}, 8, 10), RegimeError);
}

TEST_CASE("increment Gaussianity") {
  SUBCASE("H = 0.3, p = 2, n = 14") {
    const auto r = increments_gaussianity(make(0.3, 2), 2, 14, 4000);
    CHECK(r.pass);
    CHECK(r.statistics.at("target_variance") == 0.25);
  }
  SUBCASE("negative control at n = p + 2") {
    const auto r = increments_gaussianity(make(0.3, 2), 4, 6, 4000);
    CHECK_FALSE(r.pass);
  }
  CHECK_THROWS_AS(increments_gaussianity(make(0.3), 7, 12, 10), std::invalid_argument);
  CHECK_THROWS_AS(increments_gaussianity(make(0.3), 4, 4, 10), std::invalid_argument);
  CHECK_THROWS_AS(increments_gaussianity(make(0.7), 2, 8, 10), RegimeError);
}

TEST_CASE("residual CLT") {
  const auto r = residual_clt_test(make(0.7, 1), {2, 4, 6}, 12, 2000);
  CHECK(r.statistics.at("sigma") == doctest::Approx(1.0319430604753998182).epsilon(1e-14));
  CHECK(r.pass);
  CHECK_THROWS_AS(residual_clt_test(make(1.0), {2}, 12, 10), RegimeError);
  CHECK_THROWS_AS(residual_clt_test(make(0.4), {2}, 12, 10), RegimeError);
}
