#pragma once

#include <vector>

#include "csh/state.hpp"

namespace csh {

struct Trajectory;  // defined in dynamics.hpp

struct DiagnosticsOptions {
  // The solution-class gauge norms use |grad|^eps composed with H^(1/2);
  // eps is a small positive knob, 0.1 by default.
  double norm_epsilon = 0.1;
};

// Scalar observables of one state. The first nine entries are the CSV
// column contract; the trailing ones back the a priori bound checks.
struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;
  double constraint_l2 = 0.0;
  double i_value = 0.0;
  double phi_l2 = 0.0;
  double phi_h1 = 0.0;
  double phit_l2 = 0.0;
  double acf_norm = 0.0;  // || |grad|^eps A^cf ||_{H^(1/2)}, both components
  double adf_norm = 0.0;
  // extras (not part of the CSV contract)
  double dmu_sq = 0.0;              // sum_mu ||D_mu phi||_{L2}^2
  double potential_integral = 0.0;  // int V(|phi|^2) dx
};

DiagnosticsRecord record(const CSHState& state, const Potential& v,
                         const DiagnosticsOptions& opt = {});

struct BoundCheck {
  bool holds = true;
  double min_slack = 0.0;  // min over records of (bound - observed)
};

// Gronwall envelope: ||phi(t)||^2 <= e^{2 a |t-t0|} (||phi(0)||^2 + |t-t0| |E(0)|/a).
// A proved inequality for sign-condition potentials; any violation beyond
// round-off slack indicates a solver defect.
BoundCheck gronwall_check(const std::vector<DiagnosticsRecord>& series, double alpha);

// Energy inequality: sum_mu ||D_mu phi(t)||^2 <= |E(0)| + a^2 ||phi(t)||^2.
BoundCheck energy_bound_check(const std::vector<DiagnosticsRecord>& series, double alpha);

struct TrajectoryDifference {
  std::vector<double> times;
  std::vector<double> phi_sup, phi_l2;
  std::vector<double> phit_sup, phit_l2;
  std::vector<double> gauge_sup, gauge_l2;
  std::vector<double> phi_abs_sup;  // difference of |phi|, gauge-blind
  double max_sup = 0.0;             // over all fields and times
};

TrajectoryDifference compare_trajectories(const Trajectory& a, const Trajectory& b);

}  // namespace csh
