#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cascade/params.hpp"

namespace cascade {

/// Outcome of one Monte-Carlo check.
///
/// Every asserted quantity is stored under `statistics` together with an
/// upper bound of the same name in `thresholds`; `pass` holds iff each of them
/// is within its bound. Statistics without a threshold are informational.
struct StatReport {
  std::string test;
  CascadeParams params;
  std::size_t sample_size = 0;
  std::vector<unsigned> depths;
  std::map<std::string, double> statistics;
  std::map<std::string, double> thresholds;
  bool pass = true;
  double runtime_seconds = 0.0;

  void record(const std::string& name, double value) { statistics[name] = value; }
  /// Records value and asserts value <= threshold. NaN never passes.
  void check(const std::string& name, double value, double threshold);
  /// Recomputes `pass` from statistics and thresholds.
  bool evaluate() const;
};

/// Phi(x) via erfc, accurate to a few ulp over the whole line.
double normal_cdf(double x);

/// sup_x |F_N(x) - F(x)| for the empirical CDF of `samples`.
double ks_statistic(Eigen::VectorXd samples, const std::function<double(double)>& cdf);
/// Against the standard normal.
double ks_statistic(const Eigen::VectorXd& samples);

/// Mean of x^q with its standard error sd(x^q) / sqrt(N).
struct SampleMoment {
  double value = 0.0;
  double standard_error = 0.0;
};
SampleMoment sample_moment(const Eigen::VectorXd& samples, unsigned q);

/// (estimate - target) / se. With se = 0 a difference within 1e-12 relative
/// counts as 0.
double z_score(double estimate, double target, double standard_error);

/// KS of X_n(1) against N(0, 1) for each n in `depths`, sample moments of
/// order 1..4 against the exact normalized table (|z| <= 4), and
/// D(n_last) <= d_threshold. With more than one depth, D must decrease along
/// `depths` (statistic "D_trend" = max successive increase, bound 0).
/// d_threshold <= 0 selects 0.08 at the critical point and 0.05 otherwise.
/// H <= 1/2 or symmetric; RegimeError otherwise.
StatReport clt_terminal_test(const CascadeParams& params, const std::vector<unsigned>& depths,
                             std::size_t reps, double d_threshold = 0.0);

/// For each H of `hurst_values` (all in (1/2, 1)): draws of Z_n / sigma_H,
/// KS against N(0, 1), mean against 1 / sigma_H and second moment against 1,
/// both within 4 standard errors. D must decrease along the sequence.
/// n = 0 picks, per H, the smallest n whose E(Z_n^2) is within 0.1% of the
/// limit, subject to the Monte-Carlo budget. The exact finite-n second
/// moment is reported next to the limit value.
StatReport clt_smallH_test(const CascadeParams& base_params, const std::vector<double>& hurst_values,
                           unsigned n, std::size_t reps);

/// Generation-p increments of X_n: per cell KS against N(0, b^-p), every
/// variance within 4 SE of b^-p and every covariance within 4 SE of 0.
/// Also records the largest absolute covariance error. Needs p <= 6, p < n.
StatReport increments_gaussianity(const CascadeParams& params, unsigned p, unsigned n, std::size_t reps);

/// (Z_{n+m} - Z_n) / (sigma b^(n(1/2-H))) with sigma^2 = E(Z^2) - 1, for each
/// n of `depths`. KS against N(0, 1), residual mean within 4 SE of 0, and D
/// decreasing along `depths`. Convergent regime with H < 1.
StatReport residual_clt_test(const CascadeParams& params, const std::vector<unsigned>& depths, unsigned m,
                             std::size_t reps);

/// z-scores of the sample moments of Z_n against z_moment_recursion for
/// q = 1..q_max; all |z| <= 4.
StatReport empirical_vs_exact_moments(const CascadeParams& params, unsigned n, std::size_t reps,
                                      unsigned q_max);

}  // namespace cascade
