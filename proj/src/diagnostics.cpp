#include "csh/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csh/dynamics.hpp"
#include "csh/errors.hpp"

namespace csh {

namespace {
// || |grad|^eps a ||_{H^(1/2)} summed in quadrature over both components
double gauge_class_norm(const GaugeField& a, double eps) {
  const Multiplier m = Multiplier::abs_grad(eps);
  const double nx = sobolev_norm(apply_multiplier(as_spectral(a.x), m), 0.5);
  const double ny = sobolev_norm(apply_multiplier(as_spectral(a.y), m), 0.5);
  return std::hypot(nx, ny);
}
}  // namespace

DiagnosticsRecord record(const CSHState& state, const Potential& v,
                         const DiagnosticsOptions& opt) {
  DiagnosticsRecord r;
  r.t = state.time();

  GaugeField a_total = state.assembled_gauge();
  a_total.x = add_constant(a_total.x, state.a_mean()[0]);
  a_total.y = add_constant(a_total.y, state.a_mean()[1]);
  const auto cov = covariant_gradient(state.phi(), a_total);

  r.phi_l2 = l2_norm(state.phi());
  r.phit_l2 = l2_norm(state.phi_t());
  r.phi_h1 = sobolev_norm(as_spectral(state.phi()), 1.0);

  const double d1 = l2_norm(cov[0]);
  const double d2 = l2_norm(cov[1]);
  r.dmu_sq = r.phit_l2 * r.phit_l2 + d1 * d1 + d2 * d2;
  r.i_value = r.phi_l2 + d1 + d2 + r.phit_l2;

  r.potential_integral =
      v.is_zero() ? 0.0
                  : integral(eval_potential(v, abs_squared(state.phi()))).real();
  r.energy = r.dmu_sq + r.potential_integral;

  r.constraint_l2 = constraint_residual(state).l2;
  r.acf_norm = gauge_class_norm(state.curl_free_part(), opt.norm_epsilon);
  r.adf_norm = gauge_class_norm(state.div_free_part(), opt.norm_epsilon);
  return r;
}

BoundCheck gronwall_check(const std::vector<DiagnosticsRecord>& series,
                          double alpha) {
  if (!(alpha > 0.0)) throw UsageError("gronwall_check needs alpha > 0");
  if (series.empty()) throw UsageError("gronwall_check needs a nonempty series");
  const double t0 = series.front().t;
  const double phi0_sq = series.front().phi_l2 * series.front().phi_l2;
  const double e0 = std::abs(series.front().energy);
  BoundCheck out;
  out.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& r : series) {
    const double tt = std::abs(r.t - t0);
    const double bound = std::exp(2.0 * alpha * tt) * (phi0_sq + tt * e0 / alpha);
    const double slack = bound - r.phi_l2 * r.phi_l2;
    out.min_slack = std::min(out.min_slack, slack);
    if (slack < -1e-12 * std::max(1.0, bound)) out.holds = false;
  }
  return out;
}

BoundCheck energy_bound_check(const std::vector<DiagnosticsRecord>& series,
                              double alpha) {
  if (!(alpha > 0.0)) throw UsageError("energy_bound_check needs alpha > 0");
  if (series.empty()) throw UsageError("energy_bound_check needs a nonempty series");
  const double e0 = std::abs(series.front().energy);
  BoundCheck out;
  out.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& r : series) {
    const double bound = e0 + alpha * alpha * r.phi_l2 * r.phi_l2;
    const double slack = bound - r.dmu_sq;
    out.min_slack = std::min(out.min_slack, slack);
    if (slack < -1e-12 * std::max(1.0, bound)) out.holds = false;
  }
  return out;
}

TrajectoryDifference compare_trajectories(const Trajectory& a,
                                          const Trajectory& b) {
  if (a.states.size() != b.states.size())
    throw UsageError("trajectories have different record counts");
  TrajectoryDifference d;
  for (size_t i = 0; i < a.states.size(); ++i) {
    const CSHState& sa = a.states[i];
    const CSHState& sb = b.states[i];
    if (sa.grid() != sb.grid()) throw UsageError("trajectories live on different grids");
    if (std::abs(sa.time() - sb.time()) > 1e-12)
      throw UsageError("trajectories have different record times");
    d.times.push_back(sa.time());

    d.phi_sup.push_back(sup_norm_difference(sa.phi(), sb.phi()));
    d.phi_l2.push_back(l2_norm_difference(sa.phi(), sb.phi()));
    d.phit_sup.push_back(sup_norm_difference(sa.phi_t(), sb.phi_t()));
    d.phit_l2.push_back(l2_norm_difference(sa.phi_t(), sb.phi_t()));

    GaugeField ga = sa.assembled_gauge();
    GaugeField gb = sb.assembled_gauge();
    ga.x = add_constant(ga.x, sa.a_mean()[0]);
    ga.y = add_constant(ga.y, sa.a_mean()[1]);
    gb.x = add_constant(gb.x, sb.a_mean()[0]);
    gb.y = add_constant(gb.y, sb.a_mean()[1]);
    const double gx_sup = sup_norm_difference(ga.x, gb.x);
    const double gy_sup = sup_norm_difference(ga.y, gb.y);
    d.gauge_sup.push_back(std::max(gx_sup, gy_sup));
    d.gauge_l2.push_back(std::hypot(l2_norm_difference(ga.x, gb.x),
                                    l2_norm_difference(ga.y, gb.y)));

    ScalarField abs_a = abs_squared(sa.phi());
    ScalarField abs_b = abs_squared(sb.phi());
    // compare |phi| rather than |phi|^2
    for (size_t j = 0; j < abs_a.size(); ++j) {
      abs_a[j] = std::sqrt(abs_a[j].real());
      abs_b[j] = std::sqrt(abs_b[j].real());
    }
    d.phi_abs_sup.push_back(sup_norm_difference(abs_a, abs_b));

    d.max_sup = std::max({d.max_sup, d.phi_sup.back(), d.phit_sup.back(),
                          d.gauge_sup.back()});
  }
  return d;
}

}  // namespace csh
