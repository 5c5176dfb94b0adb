#pragma once

#include <array>
#include <complex>
#include <vector>

#include "csh/grid.hpp"

namespace csh {

using cplx = std::complex<double>;

enum class Rep { physical, spectral };

// One complex scalar field on a TorusGrid, either as point samples or as
// Fourier amplitudes. Value semantics throughout; the free functions below
// are pure.
class ScalarField {
 public:
  ScalarField(TorusGrid grid, Rep rep)
      : grid_(std::move(grid)), rep_(rep), v_(static_cast<size_t>(grid_.size())) {}
  ScalarField(TorusGrid grid, Rep rep, std::vector<cplx> values);

  const TorusGrid& grid() const { return grid_; }
  Rep rep() const { return rep_; }

  cplx& operator[](size_t i) { return v_[i]; }
  const cplx& operator[](size_t i) const { return v_[i]; }
  cplx& at(int ix, int iy) { return v_[static_cast<size_t>(iy) * grid_.n() + ix]; }
  const cplx& at(int ix, int iy) const { return v_[static_cast<size_t>(iy) * grid_.n() + ix]; }

  cplx* data() { return v_.data(); }
  const cplx* data() const { return v_.data(); }
  size_t size() const { return v_.size(); }

  void set_rep(Rep r) { rep_ = r; }  // used by the transform routines only

 private:
  TorusGrid grid_;
  Rep rep_;
  std::vector<cplx> v_;
};

// Fourier multiplier, evaluated on the wavenumber lattice. Odd symbols
// (partial derivatives and their inverse-Laplacian composites) zero the
// unpaired Nyquist row/column so real fields stay real. The zero mode of the
// inverse Laplacian is defined as 0 (mean-removed inverse).
class Multiplier {
 public:
  static Multiplier partial(int axis);          // d_j  <->  i k_j
  static Multiplier abs_grad(double alpha);     // |grad|^a  <->  |k|^a
  static Multiplier bessel(double alpha);       // <grad>^a  <->  (1+|k|^2)^(a/2)
  static Multiplier inv_lap_partial(int axis);  // Lap^-1 d_j  <->  -i k_j/|k|^2
  static Multiplier inv_neg_lap();              // (-Lap)^-1  <->  1/|k|^2
  static Multiplier laplacian();                // Lap  <->  -|k|^2

  cplx symbol(double kx, double ky) const;
  bool odd() const { return odd_; }

 private:
  enum class Kind { partial, abs_grad, bessel, inv_lap_partial, inv_neg_lap, laplacian };
  Multiplier(Kind k, int axis, double alpha, bool odd)
      : kind_(k), axis_(axis), alpha_(alpha), odd_(odd) {}
  Kind kind_;
  int axis_;
  double alpha_;
  bool odd_;
};

struct GaugeField {
  ScalarField x, y;
  GaugeField(ScalarField fx, ScalarField fy) : x(std::move(fx)), y(std::move(fy)) {}
  explicit GaugeField(const TorusGrid& g, Rep rep = Rep::physical)
      : x(g, rep), y(g, rep) {}
  const TorusGrid& grid() const { return x.grid(); }
};

struct HelmholtzParts {
  GaugeField df;               // divergence-free, mean-free
  GaugeField cf;               // curl-free, mean-free
  std::array<double, 2> mean;  // the k = 0 mode
};

// -- transforms ---------------------------------------------------------

ScalarField to_spectral(const ScalarField& f);    // physical -> spectral
ScalarField from_spectral(const ScalarField& f);  // spectral -> physical
// spectral copy regardless of input representation
ScalarField as_spectral(const ScalarField& f);
ScalarField as_physical(const ScalarField& f);

// -- multipliers and projections ----------------------------------------

// Applies the symbol coefficient-wise; accepts either representation and
// returns the result in the input's representation.
ScalarField apply_multiplier(const ScalarField& f, const Multiplier& m);

// Derivative of a real-valued field, with the eps-level imaginary residue of
// the transform round trip stripped.
ScalarField derivative_real(const ScalarField& f, int axis);

HelmholtzParts helmholtz_decompose(const GaugeField& a);

// 2/3-rule truncation: modes with max(|m1|,|m2|) > n/3 are zeroed.
ScalarField dealias(const ScalarField& f);
// dealias + force-real, for fields that are real by construction
ScalarField dealias_real(const ScalarField& f);
bool within_dealias_band(const TorusGrid& g, int i1, int i2);

// -- norms and quadrature -----------------------------------------------

// l^2 of <k>^s-weighted (or |k|^s-weighted, skipping k = 0) amplitudes,
// scaled so that s = 0 reproduces the continuum L^2 norm.
double sobolev_norm(const ScalarField& f, double s, bool homogeneous = false);

double l2_norm(const ScalarField& f);           // physical quadrature
double lp_norm(const ScalarField& f, double p); // p = inf -> sup norm
double sup_norm(const ScalarField& f);
cplx integral(const ScalarField& f);
cplx mean(const ScalarField& f);
cplx inner_product(const ScalarField& a, const ScalarField& b);  // int conj(a) b

// -- pointwise algebra ---------------------------------------------------

ScalarField multiply(const ScalarField& a, const ScalarField& b);
ScalarField conj_multiply(const ScalarField& a, const ScalarField& b);  // conj(a)*b
ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField subtract(const ScalarField& a, const ScalarField& b);
ScalarField scale(const ScalarField& a, cplx s);
void axpy(ScalarField& y, cplx alpha, const ScalarField& x);  // y += alpha x
ScalarField real_part(const ScalarField& a);
ScalarField imag_part(const ScalarField& a);
ScalarField conj_field(const ScalarField& a);
ScalarField abs_squared(const ScalarField& a);
ScalarField add_constant(const ScalarField& a, cplx c);
bool all_finite(const ScalarField& a);

double sup_norm_difference(const ScalarField& a, const ScalarField& b);
double l2_norm_difference(const ScalarField& a, const ScalarField& b);

// -- gauge-field helpers --------------------------------------------------

GaugeField add(const GaugeField& a, const GaugeField& b);
GaugeField subtract(const GaugeField& a, const GaugeField& b);
GaugeField scale(const GaugeField& a, double s);
GaugeField dealias_real(const GaugeField& a);
// d1 a2 - d2 a1
ScalarField curl(const GaugeField& a);
// d1 a1 + d2 a2
ScalarField divergence(const GaugeField& a);
std::array<double, 2> field_mean(const GaugeField& a);

void require_same_grid(const ScalarField& a, const ScalarField& b);

}  // namespace csh
