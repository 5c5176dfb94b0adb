#pragma once

#include <array>
#include <optional>

#include "csh/field.hpp"
#include "csh/potential.hpp"

namespace csh {

// How the gauge block of a state is stored.
//   curl_free_part: `gauge` holds A^cf (mean-free, curl-free); the
//     divergence-free part is derived from the matter fields. This is the
//     canonical form produced by the compatible-data constructor and by the
//     reformulated evolution.
//   full_field: `gauge` holds the whole mean-free A = A^df + A^cf, e.g. a
//     state loaded from a snapshot or produced by the direct evolution, whose
//     gauge field is integrated as one block.
enum class GaugeStorage { curl_free_part, full_field };

// Dynamical state at one time: the scalar field, its time derivative, and
// the gauge sector in temporal gauge (A_0 = 0). The k = 0 mode of A is kept
// separately because on the torus it is invisible to both Helmholtz
// projectors and to the matter-current reconstruction of A^df.
class CSHState {
 public:
  CSHState(double t, ScalarField phi, ScalarField phi_t, GaugeField gauge,
           std::array<double, 2> a_mean, GaugeStorage storage);

  double time() const { return time_; }
  void set_time(double t) { time_ = t; }
  const TorusGrid& grid() const { return phi_.grid(); }

  const ScalarField& phi() const { return phi_; }
  const ScalarField& phi_t() const { return phi_t_; }
  const GaugeField& gauge() const { return gauge_; }
  GaugeStorage storage() const { return storage_; }
  const std::array<double, 2>& a_mean() const { return a_mean_; }

  // Mean-free assembled gauge field A^df + A^cf (add a_mean for the total).
  const GaugeField& assembled_gauge() const;
  // Curl-free / divergence-free parts regardless of storage mode.
  GaugeField curl_free_part() const;
  GaugeField div_free_part() const;

 private:
  double time_;
  ScalarField phi_, phi_t_;
  GaugeField gauge_;
  std::array<double, 2> a_mean_;
  GaugeStorage storage_;
  mutable std::optional<GaugeField> assembled_;  // write-once cache
};

// Half-wave pair phi_pm = (phi -+ i <grad>^-1 phi_t)/2, so that
// phi = phi_+ + phi_- and phi_t = i <grad> (phi_+ - phi_-).
struct HalfWavePair {
  ScalarField plus, minus;
};

// -- covariant calculus -------------------------------------------------

// D_j phi = d_j phi - i A_j phi (spectral derivative, pointwise product,
// 2/3-rule truncation of the result).
std::array<ScalarField, 2> covariant_gradient(const ScalarField& phi,
                                              const GaugeField& a);

// Divergence-free gauge part reconstructed from the matter current:
//   A^df_1 = -2 Lap^-1 d_2 Im(conj(phi) phi_t)
//   A^df_2 = +2 Lap^-1 d_1 Im(conj(phi) phi_t)
// Mean-free and divergence-free by construction.
GaugeField adf_from_matter(const ScalarField& phi, const ScalarField& phi_t);

// E(t) = int |phi_t|^2 + sum_j |D_j phi|^2 + V(|phi|^2) dx  (trapezoid
// quadrature, spectrally accurate for periodic integrands).
double energy(const CSHState& state, const Potential& v);

struct ConstraintResidual {
  ScalarField field;  // d_1 A_2 - d_2 A_1 - 2 Im(conj(phi) phi_t)
  double l2;
};
ConstraintResidual constraint_residual(const CSHState& state);

// I(t) = ||phi|| + sum_j ||D_j phi|| + ||phi_t||  (all L^2).
double i_functional(const CSHState& state);

struct CompatibleDataOptions {
  double curl_tolerance = 1e-10;  // relative, on the free gauge part
  double mean_tolerance = 1e-11;  // on the mean of Im(conj(phi0) phi1)
  bool project_curl = false;      // project instead of rejecting stray curl
};

// Builds a constraint-satisfying state: A(0) = a_cf_free + A^df(phi0, phi1)
// (+ a_mean). Rejects a free part with curl beyond tolerance unless
// projection is requested, and rejects matter data whose current has a
// nonzero spatial mean: on the torus the left side of the constraint is an
// exact curl, so a mean current cannot be matched by any periodic A.
CSHState make_compatible_data(const ScalarField& phi0, const ScalarField& phi1,
                              const GaugeField& a_cf_free,
                              std::array<double, 2> a_mean,
                              const CompatibleDataOptions& opt = {});

HalfWavePair half_wave_split(const ScalarField& phi, const ScalarField& phi_t);
// returns (phi, phi_t)
std::array<ScalarField, 2> half_wave_merge(const HalfWavePair& pair);

}  // namespace csh
