#include "cascade/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cascade/moments.hpp"
#include "cascade/path.hpp"
#include "cascade/sampling.hpp"
#include "cascade/sign_field.hpp"

namespace cascade {

namespace {

constexpr double kZBound = 4.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string key(const char* name, const char* label, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%s%g", name, label, value);
  return buf;
}

// Largest successive increase along the sequence; <= 0 iff non-increasing.
double trend(const std::vector<double>& d) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < d.size(); ++i) worst = std::max(worst, d[i] - d[i - 1]);
  return worst;
}

}  // namespace

void StatReport::check(const std::string& name, double value, double threshold) {
  statistics[name] = value;
  thresholds[name] = threshold;
  if (!(value <= threshold)) pass = false;
}

bool StatReport::evaluate() const {
  for (const auto& [name, bound] : thresholds) {
    const auto it = statistics.find(name);
    if (it == statistics.end() || !(it->second <= bound)) return false;
  }
  return true;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_statistic(Eigen::VectorXd samples, const std::function<double(double)>& cdf) {
  const Eigen::Index n = samples.size();
  if (n == 0) throw std::invalid_argument("ks_statistic: no samples");
  std::sort(samples.data(), samples.data() + n);
  const double inv = 1.0 / static_cast<double>(n);
  double d = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double f = cdf(samples(i));
    d = std::max({d, f - static_cast<double>(i) * inv, static_cast<double>(i + 1) * inv - f});
  }
  return d;
}

double ks_statistic(const Eigen::VectorXd& samples) { return ks_statistic(samples, normal_cdf); }

SampleMoment sample_moment(const Eigen::VectorXd& samples, unsigned q) {
  const Eigen::Index n = samples.size();
  if (n == 0) throw std::invalid_argument("sample_moment: no samples");
  const Eigen::ArrayXd powers = samples.array().pow(static_cast<double>(q));
  SampleMoment m;
  m.value = powers.mean();
  if (n > 1) {
    const double var = (powers - m.value).square().sum() / static_cast<double>(n - 1);
    m.standard_error = std::sqrt(var / static_cast<double>(n));
  }
  return m;
}

double z_score(double estimate, double target, double standard_error) {
  const double diff = estimate - target;
  // Degenerate samples (e.g. H = 1) meet targets that carry table rounding.
  if (standard_error == 0.0 && std::fabs(diff) <= 1e-12 * std::max(1.0, std::fabs(target))) return 0.0;
  if (diff == 0.0) return 0.0;
  return diff / standard_error;
}

StatReport clt_terminal_test(const CascadeParams& params, const std::vector<unsigned>& depths,
                             std::size_t reps, double d_threshold) {
  const auto start = Clock::now();
  const Regime regime = regime_of(params);
  if (regime == Regime::Convergent) {
    throw RegimeError("the central limit theorem for X_n(1) concerns H <= 1/2 or the symmetric case");
  }
  if (depths.empty()) throw std::invalid_argument("clt_terminal_test: no depths");
  if (d_threshold <= 0.0) d_threshold = regime == Regime::Critical ? 0.08 : 0.05;

  StatReport report;
  report.test = "clt_terminal";
  report.params = params;
  report.sample_size = reps;
  report.depths = depths;

  const unsigned n_top = *std::max_element(depths.begin(), depths.end());
  const MomentTable exact = normalized_moment_recursion(params, n_top, 4);
  std::vector<double> ds;
  for (const unsigned n : depths) {
    const Eigen::VectorXd x = sample_terminal(params, n, reps) / normalization_divisor(params, n);
    const double d = ks_statistic(x);
    ds.push_back(d);
    report.record(key("D", "n", n), d);
    for (unsigned q = 1; q <= 4; ++q) {
      const SampleMoment m = sample_moment(x, q);
      const std::string suffix = "q" + std::to_string(q) + "_n" + std::to_string(n);
      report.record("moment_" + suffix, m.value);
      report.record("exact_" + suffix, exact.at(n, q));
      report.check("abs_z_" + suffix, std::fabs(z_score(m.value, exact.at(n, q), m.standard_error)), kZBound);
    }
  }
  report.check("D_final", ds.back(), d_threshold);
  if (ds.size() > 1) report.check("D_trend", trend(ds), 0.0);
  report.runtime_seconds = seconds_since(start);
  return report;
}

StatReport clt_smallH_test(const CascadeParams& base_params, const std::vector<double>& hurst_values,
                           unsigned n, std::size_t reps) {
  const auto start = Clock::now();
  if (hurst_values.empty()) throw std::invalid_argument("clt_smallH_test: no H values");
  StatReport report;
  report.test = "clt_smallH";
  report.params = base_params;
  report.sample_size = reps;

  std::vector<double> ds;
  for (const double h : hurst_values) {
    CascadeParams params = base_params;
    params.hurst = Hurst::finite(h);
    if (regime_of(params) != Regime::Convergent || h >= 1.0) {
      throw RegimeError("clt_smallH_test: every H must lie in (1/2, 1)");
    }
    const double limit2 = limit_z_moments(params, 2)(2);
    unsigned depth = n;
    if (depth == 0) {
      // Smallest n with E(Z_n^2) within 0.1% of the limit, within budget.
      unsigned cap = 0;
      while (static_cast<double>(reps) * 2.0 * std::pow(static_cast<double>(params.base), cap + 1.0) <=
             static_cast<double>(kMaxReplicaWork)) {
        ++cap;
      }
      const MomentTable t = z_moment_recursion(params, cap, 2);
      depth = cap;
      for (unsigned k = 0; k <= cap; ++k) {
        if (std::fabs(t.at(k, 2) - limit2) <= 1e-3 * limit2) {
          depth = k;
          break;
        }
      }
    }
    report.depths.push_back(depth);

    const double inv_sigma = 1.0 / sigma(params);
    const Eigen::VectorXd x = sample_terminal(params, depth, reps) * inv_sigma;
    const double d = ks_statistic(x);
    ds.push_back(d);
    const double finite2 = z_moment_recursion(params, depth, 2).at(depth, 2) * inv_sigma * inv_sigma;

    const SampleMoment m1 = sample_moment(x, 1);
    const SampleMoment m2 = sample_moment(x, 2);
    report.record(key("D", "H", h), d);
    report.record(key("n", "H", h), depth);
    report.record(key("mean", "H", h), m1.value);
    report.record(key("expected_mean", "H", h), inv_sigma);
    report.check(key("abs_z_mean", "H", h), std::fabs(z_score(m1.value, inv_sigma, m1.standard_error)), kZBound);
    report.record(key("second_moment", "H", h), m2.value);
    report.record(key("finite_n_second_moment", "H", h), finite2);
    report.check(key("abs_z_second_moment", "H", h), std::fabs(z_score(m2.value, 1.0, m2.standard_error)),
                 kZBound);
  }
  if (ds.size() > 1) report.check("D_trend", trend(ds), 0.0);
  report.runtime_seconds = seconds_since(start);
  return report;
}

StatReport increments_gaussianity(const CascadeParams& params, unsigned p, unsigned n, std::size_t reps) {
  const auto start = Clock::now();
  if (regime_of(params) == Regime::Convergent) {
    throw RegimeError("Brownian increments of X_n are a statement about H <= 1/2 or the symmetric case");
  }
  if (p > 6 || p >= n) throw std::invalid_argument("increments_gaussianity: need p <= 6 and p < n");

  StatReport report;
  report.test = "increments_gaussianity";
  report.params = params;
  report.sample_size = reps;
  report.depths = {p, n};

  const Eigen::MatrixXd x = sample_cell_increments(params, p, n, reps) / normalization_divisor(params, n);
  const auto cells = x.cols();
  const double nr = static_cast<double>(reps);
  const double target = std::pow(static_cast<double>(params.base), -static_cast<double>(p));
  const double sd = std::sqrt(target);

  double max_d = 0.0;
  for (Eigen::Index c = 0; c < cells; ++c) {
    max_d = std::max(max_d, ks_statistic(x.col(c), [sd](double v) { return normal_cdf(v / sd); }));
  }
  report.record("max_cell_D", max_d);

  // Cov(i, j) = E(c_i c_j) with c the centered columns; the standard error of
  // a mean of products is sd(c_i c_j) / sqrt(N).
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / nr;
  const Eigen::MatrixXd sq = centered.array().square().matrix();
  const Eigen::MatrixXd fourth = sq.transpose() * sq / nr;
  const Eigen::MatrixXd se = ((fourth.array() - cov.array().square()).max(0.0) / nr).sqrt().matrix();

  double max_var_z = 0.0, max_cov_z = 0.0, max_cov_err = 0.0;
  for (Eigen::Index i = 0; i < cells; ++i) {
    for (Eigen::Index j = i; j < cells; ++j) {
      const double expected = i == j ? target : 0.0;
      const double z = std::fabs(z_score(cov(i, j), expected, se(i, j)));
      max_cov_err = std::max(max_cov_err, std::fabs(cov(i, j) - expected));
      if (i == j) {
        max_var_z = std::max(max_var_z, z);
      } else {
        max_cov_z = std::max(max_cov_z, z);
      }
    }
  }
  report.record("target_variance", target);
  report.record("max_covariance_error", max_cov_err);
  report.check("max_abs_z_variance", max_var_z, kZBound);
  if (cells > 1) report.check("max_abs_z_covariance", max_cov_z, kZBound);
  report.runtime_seconds = seconds_since(start);
  return report;
}

StatReport residual_clt_test(const CascadeParams& params, const std::vector<unsigned>& depths, unsigned m,
                             std::size_t reps) {
  const auto start = Clock::now();
  if (regime_of(params) != Regime::Convergent || params.hurst.value() >= 1.0) {
    throw RegimeError("the residual process is defined for 1/2 < H < 1");
  }
  if (depths.empty()) throw std::invalid_argument("residual_clt_test: no depths");

  StatReport report;
  report.test = "residual_clt";
  report.params = params;
  report.sample_size = reps;
  report.depths = depths;

  const double h = params.hurst.value();
  const double b = params.base;
  const double s = std::sqrt(limit_z_moments(params, 2)(2) - 1.0);
  report.record("sigma", s);
  report.record("m", m);

  std::vector<double> ds;
  for (const unsigned n : depths) {
    const Eigen::MatrixXd z = sample_martingale(params, n + m, reps);
    const double scale = s * std::pow(b, n * (0.5 - h));
    const Eigen::VectorXd x = (z.col(n + m) - z.col(n)) / scale;
    const double d = ks_statistic(x);
    ds.push_back(d);
    const SampleMoment mean = sample_moment(x, 1);
    report.record(key("D", "n", n), d);
    report.record(key("mean", "n", n), mean.value);
    report.check(key("abs_z_mean", "n", n), std::fabs(z_score(mean.value, 0.0, mean.standard_error)), kZBound);
    report.record(key("variance", "n", n), sample_moment(x, 2).value - mean.value * mean.value);
  }
  if (ds.size() > 1) report.check("D_trend", trend(ds), 0.0);
  report.runtime_seconds = seconds_since(start);
  return report;
}

StatReport empirical_vs_exact_moments(const CascadeParams& params, unsigned n, std::size_t reps,
                                      unsigned q_max) {
  const auto start = Clock::now();
  StatReport report;
  report.test = "empirical_vs_exact_moments";
  report.params = params;
  report.sample_size = reps;
  report.depths = {n};

  const MomentTable exact = z_moment_recursion(params, n, q_max);
  const Eigen::VectorXd x = sample_terminal(params, n, reps);
  for (unsigned q = 1; q <= q_max; ++q) {
    const SampleMoment m = sample_moment(x, q);
    const std::string suffix = "q" + std::to_string(q);
    report.record("moment_" + suffix, m.value);
    report.record("exact_" + suffix, exact.at(n, q));
    report.check("abs_z_" + suffix, std::fabs(z_score(m.value, exact.at(n, q), m.standard_error)), kZBound);
  }
  report.runtime_seconds = seconds_since(start);
  return report;
}

}  // namespace cascade
