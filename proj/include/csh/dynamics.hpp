#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csh/diagnostics.hpp"
#include "csh/state.hpp"

namespace csh {

enum class Formulation { direct, reformulated, halfwave };

struct SchemeConfig {
  Formulation formulation = Formulation::reformulated;
  double dt = 1e-3;
  double t_end = 1.0;
  int record_stride = 10;
  bool dealias = true;
  // interaction toggles; turning the gauge coupling off and using V(r) = r
  // gives the exactly solvable dispersive test mode
  bool gauge_coupling = true;
  bool potential_on = true;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<CSHState> states;
  std::vector<DiagnosticsRecord> records;
  std::optional<CSHState> final_state;  // state at the last completed step
  bool blew_up = false;
  double blowup_time = 0.0;
  std::string warning;  // set when the initial data violates the constraint
};

struct RhsOptions {
  bool dealias = true;
  bool gauge_coupling = true;
  bool potential_on = true;
};

// Time derivatives of the direct system. Sign convention, fixed once for the
// whole artifact and verified by the energy/constraint tests:
//   d_t A_1 = -2 Im(conj(phi) D_2 phi)
//   d_t A_2 = +2 Im(conj(phi) D_1 phi)
//   d_t^2 phi = Lap phi - 2i A.grad phi - i (div A) phi - |A|^2 phi - phi V'(|phi|^2)
// with Euclidean spatial contractions throughout.
struct DirectRates {
  ScalarField dphi, dphi_t;
  GaugeField da;  // rate of the full gauge field, k = 0 mode included
};
DirectRates rhs_direct(const CSHState& state, const Potential& v,
                       const RhsOptions& opt = {});

// Time derivatives of the reduced system: A^df is reconstructed from the
// matter fields and never integrated; the A^cf rate is the curl-free
// Helmholtz projection of the direct gauge law, and the k = 0 mode of A is
// advanced by the spatial mean of the direct law.
struct ReformulatedRates {
  ScalarField dphi, dphi_t;
  GaugeField dacf;              // curl-free, mean-free
  std::array<double, 2> dmean;  // rate of the k = 0 mode
};
ReformulatedRates rhs_reformulated(const CSHState& state, const Potential& v,
                                   const RhsOptions& opt = {});

// The explicit three-term expansion of the A^cf rate for a solution of the
// constraint: a null form built from the scalar-field gradients, a gauge
// cross term, and a cubic current term. Each term is retrievable on its own;
// the projection-equivalence test pins the signs against rhs_reformulated.
//   d_t A^cf_j = 2 Lap^-1 d_j Im(d_2 conj(phi) d_1 phi - d_1 conj(phi) d_2 phi)
//              + 2 Lap^-1 d_j (A_2 d_1 |phi|^2 - A_1 d_2 |phi|^2)
//              + 4 Lap^-1 d_j (Im(conj(phi) phi_t) |phi|^2)
struct NullformAcfRates {
  GaugeField null_term, cross_term, cubic_term;
  GaugeField total() const;
};
NullformAcfRates rhs_acf_nullform(const CSHState& state,
                                  const RhsOptions& opt = {});

// Reference rate of the reconstructed A^df along a solution:
//   d_t A^df_1 = -2 Lap^-1 d_2 [sum_j d_j Im(conj(phi) D_j phi)]
//   d_t A^df_2 = +2 Lap^-1 d_1 [sum_j d_j Im(conj(phi) D_j phi)]
GaugeField adf_rate_formula(const CSHState& state);

// One classical Runge-Kutta step of scheme.dt; products are dealiased per
// stage. Throws BlowUpError when the step produces non-finite values.
CSHState step_rk4(const CSHState& state, const Potential& v,
                  const SchemeConfig& scheme);

// Exponential half-wave stepper: the dispersive factor exp(-+ i dt <grad>)
// is applied exactly, the interaction-picture nonlinearity is advanced with
// classical Runge-Kutta (Lawson scheme). The gauge sector rides along with
// the reduced (curl-free) law.
struct HalfWaveContext {
  explicit HalfWaveContext(GaugeField curl_free_block)
      : gauge(std::move(curl_free_block)) {}
  GaugeField gauge;  // curl-free block, mean-free
  std::array<double, 2> a_mean{0.0, 0.0};
  const Potential* v = nullptr;
  RhsOptions opt;
};
struct HalfWaveStepResult {
  HalfWavePair pair;
  GaugeField gauge;
  std::array<double, 2> a_mean;
};
HalfWaveStepResult step_halfwave(const HalfWavePair& pair,
                                 const HalfWaveContext& ctx, double dt);

// Largest stable step for the explicit stepper on this grid (imaginary-axis
// stability of RK4 against the fastest retained wave mode, with a safety
// factor). The half-wave stepper integrates the wave operator exactly and
// is limited only by the nonlinearity, so no grid bound applies.
double max_stable_dt(const TorusGrid& grid, Formulation f, bool dealias = true);

Trajectory evolve(const CSHState& initial, const SchemeConfig& scheme,
                  const Potential& v, const DiagnosticsOptions& diag = {});

}  // namespace csh
