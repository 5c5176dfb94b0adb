#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "csh/field.hpp"
#include "csh/random.hpp"

namespace csh {

// -- space-time samples ----------------------------------------------------

enum class TimeWindow { none, raised_cosine };

// A field recorded on grid x uniform time partition t_i = i T / nt of [0,T).
// Samples are generally not time-periodic, so the X-norm machinery applies a
// raised-cosine taper over the first and last 10% of the window before the
// temporal transform; plain Lebesgue norms use the raw samples.
class SpaceTimeSample {
 public:
  SpaceTimeSample(TorusGrid grid, double t_span, int nt,
                  TimeWindow window = TimeWindow::raised_cosine);

  const TorusGrid& grid() const { return grid_; }
  double t_span() const { return t_span_; }
  int nt() const { return nt_; }
  double dt() const { return t_span_ / nt_; }
  TimeWindow window() const { return window_; }

  cplx* slice(int it) { return values_.data() + static_cast<size_t>(it) * grid_.size(); }
  const cplx* slice(int it) const {
    return values_.data() + static_cast<size_t>(it) * grid_.size();
  }

  // taper weight at time index it
  double window_weight(int it) const;
  // L^2([0,T]) norm of the taper; the "window factor" of the norm reports
  double window_l2() const;

 private:
  TorusGrid grid_;
  double t_span_;
  int nt_;
  TimeWindow window_;
  std::vector<cplx> values_;
};

// -- norm specifications -----------------------------------------------------

enum class XFamily {
  x_plus,   // <tau + |xi|>^b
  x_minus,  // <tau - |xi|>^b
  x_wave,   // <|tau| - |xi|>^b
  x_tau0,   // <tau>^b
};

struct NormSpec {
  XFamily family = XFamily::x_wave;
  double s = 0.0;
  double b = 0.0;
};

// modulation weight <xi>^s * w(tau, xi)^b for one (tau, xi) point
double xsb_weight(const NormSpec& spec, double tau, double kx, double ky);

// Windowed discrete space-time Fourier norm
//   || <xi>^s w(tau,xi)^b u_hat(tau,xi) ||_{l^2}
// with quadrature scaling, so s = b = 0 reproduces the windowed L^2_{xt}
// norm exactly (Plancherel). Needs at least 8 time samples.
double xsb_norm(const SpaceTimeSample& u, const NormSpec& spec);

// L^q_x L^r_t norm of the raw (unwindowed) samples, time integral first.
// Pass an infinity for a sup norm in either slot.
double mixed_norm(const SpaceTimeSample& u, double q_x, double r_t);
double lqxt_norm(const SpaceTimeSample& u, double q);  // L^q in space-time

// -- free-wave samples ---------------------------------------------------------

enum class Dispersion { wave, klein_gordon };  // omega = |k| or <k>

struct FreeWaveSpec {
  double band_lo = 1.0;  // annulus in integer mode radius |m|
  double band_hi = 4.0;
  int sign = -1;         // u(t) = exp(i * sign * t * omega(grad)) u0
  Dispersion dispersion = Dispersion::wave;
  double t_span = 2.0;
  int nt = 64;
  TimeWindow window = TimeWindow::raised_cosine;
};

// Random complex Gaussian amplitudes on the annulus, unit L^2 normalization,
// exact multiplier time evolution.
SpaceTimeSample free_wave_sample(const TorusGrid& grid, const FreeWaveSpec& spec,
                                 uint64_t seed);

// -- inequality ratios ------------------------------------------------------------

enum class Inequality { Str, T, I1, I2, I3, I4, I5, I6, covariant_sobolev };

// The concrete exponents of one inequality: LHS L^{qx}_x L^{rt}_t against
// RHS X^{s,b} over the wave modulation, with every "+" in the stated
// exponents realized as +plus_eps.
struct InequalityExponents {
  double q_x, r_t;
  NormSpec rhs;
};
InequalityExponents inequality_exponents(Inequality ineq, double plus_eps);

// LHS/RHS for one sample; both sides are homogeneous of degree one in u.
double estimate_ratio(const SpaceTimeSample& u, Inequality ineq,
                      double plus_eps = 0.01);

// -- pointwise frequency-space checks ----------------------------------------------

struct CheckPair {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds(double rel_slack = 0.0) const {
    return lhs <= rhs + rel_slack * std::max(1.0, rhs);
  }
};

// angle between xi and eta in [0, pi]
double vec_angle(const std::array<double, 2>& xi, const std::array<double, 2>& eta);

// Angle bound on a frequency-matched triple (xi3 = -xi1-xi2, tau3 = -tau1-tau2):
//   angle(s1 xi1, s2 xi2) vs
//   sqrt((<tau1 + s1|xi1|> + <tau2 + s2|xi2|>)/min(<xi1>,<xi2>))
//     + (<|tau3| - |xi3|>/min(<xi1>,<xi2>))^(1/2 - eps)
CheckPair angle_bound_check(const std::array<double, 2>& xi1, double tau1, int sign1,
                            const std::array<double, 2>& xi2, double tau2, int sign2,
                            double eps);

// Null-symbol bound |xi1 eta2 - xi2 eta1| <= |xi| |eta| angle(xi, eta),
// exact since |sin| <= identity on [0, pi].
CheckPair null_symbol_check(const std::array<double, 2>& xi,
                            const std::array<double, 2>& eta);

}  // namespace csh
