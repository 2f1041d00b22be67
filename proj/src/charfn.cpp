#include "cascade/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "cascade/moments.hpp"

namespace cascade {

namespace {

void require_convergent(const CascadeParams& params) {
  if (regime_of(params) != Regime::Convergent) {
    throw RegimeError("the limit Z and its characteristic function exist only for 1/2 < H <= 1");
  }
}

Complex power(Complex z, int b) {
  Complex r = z;
  for (int i = 1; i < b; ++i) r *= z;
  return r;
}

double tail_max(const CascadeParams& params, double t_max, unsigned depth) {
  double m = 0.0;
  constexpr int kProbes = 512;
  for (int i = 0; i <= kProbes; ++i) {
    const double t = t_max * (0.5 + 0.5 * i / kProbes);
    m = std::max(m, std::abs(charfn_at(params, t, depth)));
  }
  return m;
}

// (1 + g)^b - 1 = sum_{j=1}^b C(b, j) g^j, Horner from the top coefficient.
Complex power_minus_one(Complex g, int b) {
  double c = 1.0;  // C(b, b)
  Complex r = 0.0;
  for (int j = b; j >= 1; --j) {
    r = (r + c) * g;
    c = c * j / (b - j + 1);  // C(b, j - 1)
  }
  return r;
}

}  // namespace

std::pair<Complex, Complex> charfn_pair(const CascadeParams& params, double t, unsigned depth) {
  require_convergent(params);
  const auto [p_plus, p_minus] = epsilon_probabilities(params);
  // s0 = t w^depth, one factor per level, so the start of phi_{n+1}(t)
  // is bit-identical to that of phi_n(w t).
  const double w = params.weight();
  double s0 = t;
  for (unsigned k = 0; k < depth; ++k) s0 *= w;
  // Near t = 0 the ladder carries phi - 1: stored as phi the O(s^2) terms of
  // the deep levels would be rounded away against 1.
  const double half_sin = std::sin(0.5 * s0);
  Complex pos_m1(-2.0 * half_sin * half_sin, std::sin(s0));
  Complex neg_m1 = std::conj(pos_m1);
  unsigned k = 1;
  for (; k <= depth && std::max(std::abs(pos_m1), std::abs(neg_m1)) < 0.25; ++k) {
    const Complex next_pos = power_minus_one(p_plus * pos_m1 + p_minus * neg_m1, params.base);
    const Complex next_neg = power_minus_one(p_plus * neg_m1 + p_minus * pos_m1, params.base);
    pos_m1 = next_pos;
    neg_m1 = next_neg;
  }
  Complex pos = 1.0 + pos_m1;
  Complex neg = 1.0 + neg_m1;
  for (; k <= depth; ++k) {
    const Complex next_pos = power(p_plus * pos + p_minus * neg, params.base);
    const Complex next_neg = power(p_plus * neg + p_minus * pos, params.base);
    pos = next_pos;
    neg = next_neg;
  }
  return {pos, neg};
}

Complex charfn_at(const CascadeParams& params, double t, unsigned depth) {
  return charfn_pair(params, t, depth).first;
}

CharFnGrid charfn_grid(const CascadeParams& params, double t_max, double step, unsigned depth) {
  require_convergent(params);
  if (!(t_max > 0.0 && step > 0.0)) throw std::invalid_argument("charfn_grid: T and dt must be positive");
  CharFnGrid g;
  g.params = params;
  g.depth = depth;
  const auto half = static_cast<Eigen::Index>(std::ceil(t_max / step));
  g.step = step;
  g.t_max = static_cast<double>(half) * step;
  g.t.resize(2 * half + 1);
  g.values.resize(2 * half + 1);
  for (Eigen::Index j = 0; j <= half; ++j) {
    const double t = static_cast<double>(j) * step;
    const auto [pos, neg] = charfn_pair(params, t, depth);
    g.t(half + j) = t;
    g.t(half - j) = -t;
    g.values(half + j) = pos;
    g.values(half - j) = neg;
  }
  return g;
}

DepthSelection select_depth(const CascadeParams& params, double t_max, unsigned start, double tol,
                            unsigned max_depth) {
  require_convergent(params);
  constexpr int kProbes = 256;
  DepthSelection sel;
  for (unsigned n = start;; n += 4) {
    double gap = 0.0;
    for (int i = 0; i <= kProbes; ++i) {
      const double t = t_max * i / kProbes;
      gap = std::max(gap, std::abs(charfn_at(params, t, n) - charfn_at(params, t, n + 1)));
    }
    sel.depth = n;
    sel.gap = gap;
    sel.converged = gap < tol;
    if (sel.converged || n + 4 > max_depth) return sel;
  }
}

double DensityResult::cdf(double value) const {
  const Eigen::Index n = x.size();
  if (value <= x(0)) return 0.0;
  if (value >= x(n - 1)) return 1.0;
  const double h = x(1) - x(0);
  const auto k = std::min(static_cast<Eigen::Index>((value - x(0)) / h), n - 2);
  const double frac = (value - x(k)) / h;
  return std::clamp(cdf_grid(k) + frac * (cdf_grid(k + 1) - cdf_grid(k)), 0.0, 1.0);
}

Eigen::VectorXd DensityResult::cumulative() const {
  Eigen::VectorXd c(x.size());
  c(0) = 0.0;
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    c(i) = c(i - 1) + 0.5 * (x(i) - x(i - 1)) * (density(i) + density(i - 1));
  }
  return c;
}

DensityResult density_of_Z(const CascadeParams& params, const DensityOptions& options) {
  require_convergent(params);
  if (params.hurst.value() == 1.0) {
    throw std::domain_error("at H = 1 the limit Z is the constant 1 and has no density");
  }
  DensityResult r;
  r.params = params;

  // x grid.
  double x_min = options.x_min, x_max = options.x_max;
  if (x_min == 0.0 && x_max == 0.0) {
    const Eigen::VectorXd m = limit_z_moments(params, 2);
    const double sd = std::sqrt(m(2) - m(1) * m(1));
    x_min = m(1) - 16.0 * sd;
    x_max = m(1) + 16.0 * sd;
  }
  if (!(x_max > x_min) || options.x_points < 2) throw std::invalid_argument("density_of_Z: bad x grid");
  r.x = Eigen::VectorXd::LinSpaced(options.x_points, x_min, x_max);

  // Truncation point T.
  double t_max = options.t_max;
  if (t_max <= 0.0) {
    t_max = 8.0;
    while (tail_max(params, t_max, options.depth) >= options.tail_tol && t_max < options.t_cap) t_max *= 2.0;
  }
  r.depth = select_depth(params, t_max, options.depth, options.cauchy_tol);
  r.tail_max = tail_max(params, t_max, r.depth.depth);
  r.tail_negligible = r.tail_max < options.tail_tol;

  const double step = options.step > 0.0 ? options.step : std::numbers::pi / (x_max - x_min);
  const CharFnGrid grid = charfn_grid(params, t_max, step, r.depth.depth);
  r.t_max = grid.t_max;
  r.step = grid.step;

  const Eigen::Index nt = grid.t.size();
  r.density.resize(r.x.size());
  for (Eigen::Index i = 0; i < r.x.size(); ++i) {
    const double xi = r.x(i);
    Complex acc = 0.0;
    for (Eigen::Index j = 0; j < nt; ++j) {
      const double w = (j == 0 || j == nt - 1) ? 0.5 : 1.0;
      acc += w * grid.values(j) * std::polar(1.0, -grid.t(j) * xi);
    }
    acc *= grid.step / (2.0 * std::numbers::pi);
    r.density(i) = acc.real();
    r.max_imag_residue = std::max(r.max_imag_residue, std::abs(acc.imag()));
  }

  const double h = r.x(1) - r.x(0);
  const auto trapezoid = [&](auto&& g) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < r.x.size(); ++i) {
      const double w = (i == 0 || i == r.x.size() - 1) ? 0.5 : 1.0;
      s += w * g(r.x(i)) * r.density(i);
    }
    return s * h;
  };
  r.mass = trapezoid([](double) { return 1.0; });
  r.mean = trapezoid([](double v) { return v; });
  r.second_moment = trapezoid([](double v) { return v * v; });
  r.cdf_grid = r.cumulative();
  return r;
}

DecayFit decay_fit(const CascadeParams& params, double t_lo, double t_hi, Eigen::Index samples) {
  require_convergent(params);
  const double inv_h = 1.0 / params.hurst.value();
  const unsigned depth = select_depth(params, 64.0).depth;

  if (t_hi <= 0.0) {
    t_hi = 8.0;
    while (tail_max(params, t_hi, depth) >= 1e-12 && t_hi < 1048576.0) t_hi *= 2.0;
  }
  if (!(t_hi > t_lo)) throw std::invalid_argument("decay_fit: empty t range");

  std::vector<double> xs, ys;
  std::vector<std::pair<double, double>> kept;  // (t, |phi|)
  for (Eigen::Index i = 1; i <= samples; ++i) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) / static_cast<double>(samples);
    const double a = std::abs(charfn_at(params, t, depth));
    if (a > 1e-12 && a < 1e-2) {
      xs.push_back(std::pow(t, inv_h));
      ys.push_back(std::log(a));
      kept.emplace_back(t, a);
    }
  }
  if (xs.size() < 8) throw std::runtime_error("decay_fit: fewer than 8 samples with 1e-12 < |phi| < 1e-2");

  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = xs[static_cast<std::size_t>(i)];
    A(i, 1) = 1.0;
    y(i) = ys[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd resid = y - A * coef;
  const double ss_tot = (y.array() - y.mean()).square().sum();

  DecayFit fit;
  fit.slope = coef(0);
  fit.intercept = coef(1);
  fit.rho = std::exp(coef(0));
  fit.r_squared = ss_tot > 0.0 ? 1.0 - resid.squaredNorm() / ss_tot : 1.0;
  fit.points = n;
  fit.t_lo = kept.front().first;
  fit.t_hi = kept.back().first;

  // Octave maxima [2^k, 2^{k+1}) across the kept samples.
  std::vector<double> octave_max;
  int current = -1000;
  for (const auto& [t, a] : kept) {
    const int k = static_cast<int>(std::floor(std::log2(t)));
    if (k != current) {
      octave_max.push_back(a);
      current = k;
    } else {
      octave_max.back() = std::max(octave_max.back(), a);
    }
  }
  fit.monotone_tail = std::is_sorted(octave_max.rbegin(), octave_max.rend());
  return fit;
}

}  // namespace cascade
