#pragma once

#include <complex>
#include <utility>

#include <Eigen/Core>

#include "cascade/params.hpp"

namespace cascade {

using Complex = std::complex<double>;

/// phi_n(t) = E exp(i t Z_n), Convergent regime only.
///
/// Uses phi_0(s) = e^{is} (Z_0 = 1) and
///   phi_{k+1}(s) = [p+ phi_k(b^-H s) + p- phi_k(-b^-H s)]^b
/// over the ladder s_k = b^{-(n-k)H} t. The pair (phi_k(s_k), phi_k(-s_k)) is
/// carried up the ladder, so one evaluation costs O(n).
Complex charfn_at(const CascadeParams& params, double t, unsigned depth);

/// (phi_n(t), phi_n(-t)), both computed from the ladder without using
/// Hermitian symmetry.
std::pair<Complex, Complex> charfn_pair(const CascadeParams& params, double t, unsigned depth);

/// phi_n on the symmetric uniform grid t_j = -T + j dt, j = 0..2T/dt.
struct CharFnGrid {
  CascadeParams params;
  unsigned depth = 0;
  double t_max = 0.0;
  double step = 0.0;
  Eigen::VectorXd t;
  Eigen::VectorXcd values;
};

CharFnGrid charfn_grid(const CascadeParams& params, double t_max, double step, unsigned depth);

struct DepthSelection {
  unsigned depth = 0;
  double gap = 0.0;  // max_t |phi_depth - phi_{depth+1}| over the probe points
  bool converged = false;
};

/// Smallest depth >= start (in steps of 4, capped at max_depth) whose
/// successive-depth gap over [0, t_max] is below tol.
DepthSelection select_depth(const CascadeParams& params, double t_max, unsigned start = 48,
                            double tol = 1e-10, unsigned max_depth = 1024);

struct DensityOptions {
  double t_max = 0.0;  // 0: double from 8 until max |phi| on [T/2, T] < tail_tol
  double tail_tol = 1e-12;
  double t_cap = 1048576.0;  // 2^20
  double step = 0.0;         // 0: pi / (x range), twice the Nyquist requirement
  double x_min = 0.0, x_max = 0.0;  // both 0: mean -+ 16 standard deviations
  Eigen::Index x_points = 4096;
  unsigned depth = 48;  // starting depth for the Cauchy test
  double cauchy_tol = 1e-10;
};

struct DensityResult {
  CascadeParams params;
  double t_max = 0.0;
  double step = 0.0;
  DepthSelection depth;
  double tail_max = 0.0;  // max |phi| on [T/2, T]
  bool tail_negligible = false;
  Eigen::VectorXd x;
  Eigen::VectorXd density;
  double max_imag_residue = 0.0;
  // Trapezoid integrals over the x grid.
  double mass = 0.0;
  double mean = 0.0;
  double second_moment = 0.0;
  Eigen::VectorXd cdf_grid;  // cumulative() at the x grid

  /// Cumulative distribution from the trapezoid integral of the density,
  /// linearly interpolated, clamped to [0, 1] outside the grid.
  double cdf(double value) const;
  Eigen::VectorXd cumulative() const;
};

/// f(x) = (1/2pi) int_{-T}^{T} e^{-itx} phi(t) dt by the trapezoid rule.
DensityResult density_of_Z(const CascadeParams& params, const DensityOptions& options = {});

struct DecayFit {
  double rho = 0.0;        // exp(slope)
  double slope = 0.0;      // of log|phi| against |t|^(1/H)
  double intercept = 0.0;
  double r_squared = 0.0;
  Eigen::Index points = 0;
  double t_lo = 0.0, t_hi = 0.0;
  bool monotone_tail = false;  // octave maxima of |phi| non-increasing
};

/// Least squares of log|phi(t)| on |t|^(1/H) over the samples of (t_lo, t_hi]
/// with 1e-12 < |phi| < 1e-2. Throws std::runtime_error with fewer than 8
/// usable samples. t_hi = 0 selects the range automatically.
DecayFit decay_fit(const CascadeParams& params, double t_lo = 0.0, double t_hi = 0.0,
                   Eigen::Index samples = 4096);

}  // namespace cascade
