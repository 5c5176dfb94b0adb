#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "csh/errors.hpp"
#include "csh/estimates.hpp"
#include "csh/gauge.hpp"
#include "csh/io.hpp"
#include "csh/kernels.hpp"
#include "csh/random.hpp"

namespace csh {

namespace {

namespace fs = std::filesystem;

ScalarField zero_field(const TorusGrid& g) { return ScalarField(g, Rep::physical); }

// complex Gaussian amplitudes on the mode disk |m| <= band
ScalarField random_band_field(const TorusGrid& g, int band, Rng& rng) {
  ScalarField f(g, Rep::spectral);
  const int n = g.n();
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      if (std::hypot(g.mode(ix), g.mode(iy)) > band) continue;
      f.at(ix, iy) = rng.cgaussian();
    }
  }
  return from_spectral(f);
}

ScalarField plane_wave_field(const TorusGrid& g, int mx, int my, cplx amp) {
  ScalarField f(g, Rep::spectral);
  const int n = g.n();
  const int ix = ((mx % n) + n) % n;
  const int iy = ((my % n) + n) % n;
  f.at(ix, iy) = amp;
  return from_spectral(f);
}

struct GeneratedData {
  ScalarField phi0, phi1;
  GaugeField a_cf_free;
  std::array<double, 2> mean;
};

GeneratedData generate(const RunConfig& cfg, const TorusGrid& grid) {
  const InitialConfig& ic = cfg.initial;
  GeneratedData d{zero_field(grid), zero_field(grid), GaugeField(grid),
                  {ic.mean_x, ic.mean_y}};
  Rng rng(ic.seed);
  switch (ic.kind) {
    case InitialKind::zero:
      break;
    case InitialKind::plane_wave: {
      d.phi0 = plane_wave_field(grid, ic.mode_x, ic.mode_y, ic.amplitude);
      const double kx = 2.0 * M_PI * ic.mode_x / grid.length();
      const double ky = 2.0 * M_PI * ic.mode_y / grid.length();
      const double omega = std::sqrt(1.0 + kx * kx + ky * ky);
      d.phi1 = scale(d.phi0, cplx(0.0, -omega));
      break;
    }
    case InitialKind::gaussian_bump: {
      const double L = grid.length();
      const double cx = ic.center_x * L;
      const double cy = ic.center_y * L;
      const int n = grid.n();
      ScalarField bump(grid, Rep::physical);
      for (int iy = 0; iy < n; ++iy) {
        double dy = iy * grid.dx() - cy;
        dy -= L * std::round(dy / L);  // nearest periodic image
        for (int ix = 0; ix < n; ++ix) {
          double dx = ix * grid.dx() - cx;
          dx -= L * std::round(dx / L);
          bump.at(ix, iy) =
              ic.amplitude * std::exp(-(dx * dx + dy * dy) / (ic.width * ic.width));
        }
      }
      d.phi0 = dealias(bump);
      break;
    }
    case InitialKind::random_band: {
      d.phi0 = random_band_field(grid, ic.band, rng);
      d.phi1 = random_band_field(grid, ic.band, rng);
      const double h1 = sobolev_norm(as_spectral(d.phi0), 1.0);
      if (h1 > 0.0) d.phi0 = scale(d.phi0, ic.amplitude / h1);
      const double l2 = l2_norm(d.phi1);
      if (l2 > 0.0) d.phi1 = scale(d.phi1, ic.amplitude / l2);
      // cancel the mean of the matter current so the torus constraint has a
      // solution: phi1 -> phi1 - i c phi0 with c = int Im(conj(phi0) phi1) / int |phi0|^2
      const double denom = integral(abs_squared(d.phi0)).real();
      if (denom > 0.0) {
        const double num =
            integral(imag_part(conj_multiply(d.phi0, d.phi1))).real();
        axpy(d.phi1, cplx(0.0, -num / denom), d.phi0);
      }
      if (ic.acf_amplitude != 0.0) {
        ScalarField chi = real_part(random_band_field(grid, ic.band, rng));
        const double s = sup_norm(chi);
        if (s > 0.0) chi = scale(chi, ic.acf_amplitude / s);
        const ScalarField chi_s = to_spectral(chi);
        d.a_cf_free = GaugeField(derivative_real(chi_s, 0), derivative_real(chi_s, 1));
      }
      break;
    }
    case InitialKind::from_snapshot:
      throw UsageError("from-snapshot data is handled by build_initial_state");
  }
  return d;
}

void print_line(bool quiet, const char* fmt_str, ...) {
  if (quiet) return;
  va_list args;
  va_start(args, fmt_str);
  std::vfprintf(stdout, fmt_str, args);
  va_end(args);
  std::fputc('\n', stdout);
}

}  // namespace

CSHState build_initial_state(const RunConfig& cfg) {
  if (cfg.initial.kind == InitialKind::from_snapshot) {
    CSHState s = read_snapshot(cfg.initial.snapshot_path);
    if (s.grid().n() != cfg.grid_n ||
        s.grid().length() != cfg.grid_length)
      throw UsageError("snapshot grid does not match the configured grid");
    return s;
  }
  TorusGrid grid(cfg.grid_n, cfg.grid_length);
  GeneratedData d = generate(cfg, grid);
  if (cfg.scheme.gauge_coupling) {
    return make_compatible_data(d.phi0, d.phi1, d.a_cf_free, d.mean);
  }
  // no gauge dynamics: carry the free part as-is, no constraint applies
  const auto fm = field_mean(d.a_cf_free);
  d.a_cf_free.x = add_constant(d.a_cf_free.x, -fm[0]);
  d.a_cf_free.y = add_constant(d.a_cf_free.y, -fm[1]);
  return CSHState(0.0, d.phi0, d.phi1, d.a_cf_free,
                  {d.mean[0] + fm[0], d.mean[1] + fm[1]},
                  GaugeStorage::curl_free_part);
}

int run_simulation(const RunConfig& cfg, bool quiet) {
  const CSHState initial = build_initial_state(cfg);
  fs::create_directories(cfg.out_dir);

  const Potential v = cfg.potential();
  const Trajectory traj = evolve(initial, cfg.scheme, v, cfg.diag_options());
  if (!traj.warning.empty())
    std::fprintf(stderr, "warning: %s\n", traj.warning.c_str());

  {
    std::ofstream echo(fs::path(cfg.out_dir) / "config_resolved.cfg");
    echo << serialize_config(cfg);
  }
  write_diagnostics(traj.records, (fs::path(cfg.out_dir) / "diagnostics.csv").string());
  write_snapshot(traj.states.front(), (fs::path(cfg.out_dir) / "initial.csh").string());
  write_snapshot(*traj.final_state, (fs::path(cfg.out_dir) / "final.csh").string());

  const DiagnosticsRecord& first = traj.records.front();
  const DiagnosticsRecord& last = traj.records.back();
  double max_constraint = 0.0;
  for (const auto& r : traj.records)
    max_constraint = std::max(max_constraint, r.constraint_l2);
  print_line(quiet, "records: %zu  t: %.17g .. %.17g", traj.records.size(),
             first.t, last.t);
  print_line(quiet, "energy: E(0) = %.17g  E(end) = %.17g  relative drift = %.3e",
             first.energy, last.energy,
             std::abs(last.energy - first.energy) / std::max(std::abs(first.energy), 1.0));
  print_line(quiet, "constraint residual: max L2 = %.3e", max_constraint);

  if (cfg.diagnostics.linear_exact) {
    // closed-form dispersive mode: phi(t) = amp exp(i(k.x - <k> t))
    const TorusGrid& g = initial.grid();
    const double kx = 2.0 * M_PI * cfg.initial.mode_x / g.length();
    const double ky = 2.0 * M_PI * cfg.initial.mode_y / g.length();
    const double omega = std::sqrt(1.0 + kx * kx + ky * ky);
    const CSHState& fin = *traj.final_state;
    const cplx amp = cfg.initial.amplitude *
                     std::exp(cplx(0.0, -omega * fin.time()));
    const ScalarField exact =
        plane_wave_field(g, cfg.initial.mode_x, cfg.initial.mode_y, amp);
    print_line(quiet, "linear test mode: final-time sup error vs closed form = %.3e",
               sup_norm_difference(fin.phi(), exact));
  }

  if (traj.blew_up) {
    std::fprintf(stderr, "blow-up detected at t = %.17g; partial outputs written\n",
                 traj.blowup_time);
    return 2;
  }
  return 0;
}

int run_estimates(const RunConfig& cfg, bool quiet) {
  fs::create_directories(cfg.out_dir);
  std::ofstream csv(fs::path(cfg.out_dir) / "estimates.csv");
  if (!csv) throw Error("cannot open estimates.csv for writing");
  csv << "study,detail,n,seed,value\n";
  char buf[256];
  const auto row = [&](const char* study, const std::string& detail, int n,
                       long seed, double value) {
    std::snprintf(buf, sizeof buf, "%s,%s,%d,%ld,%.17g\n", study, detail.c_str(),
                  n, seed, value);
    csv << buf;
  };

  const EstimatesConfig& ec = cfg.estimates;
  const uint64_t base_seed = cfg.initial.seed;

  // pointwise null-symbol bound, exact trigonometric fact
  {
    Rng rng(base_seed * 1000003 + 1);
    long violations = 0;
    double sup_ratio = 0.0;
    for (long i = 0; i < ec.pointwise_samples; ++i) {
      const double s1 = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
      const double s2 = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
      const std::array<double, 2> xi = {s1 * rng.gaussian(), s1 * rng.gaussian()};
      const std::array<double, 2> eta = {s2 * rng.gaussian(), s2 * rng.gaussian()};
      if ((xi[0] == 0.0 && xi[1] == 0.0) || (eta[0] == 0.0 && eta[1] == 0.0)) continue;
      const CheckPair c = null_symbol_check(xi, eta);
      if (!c.holds(1e-12)) ++violations;
      if (c.rhs > 0.0) sup_ratio = std::max(sup_ratio, c.lhs / c.rhs);
    }
    row("null_symbol", "violations", 0, static_cast<long>(base_seed),
        static_cast<double>(violations));
    row("null_symbol", "sup_ratio", 0, static_cast<long>(base_seed), sup_ratio);
    print_line(quiet, "null symbol: %ld violations over %ld samples, sup ratio %.6f",
               violations, ec.pointwise_samples, sup_ratio);
  }

  // angle bound over frequency-matched random triples
  {
    Rng rng(base_seed * 1000003 + 2);
    double sup_ratio = 0.0;
    for (long i = 0; i < ec.pointwise_samples; ++i) {
      const double s1 = std::exp(rng.uniform(std::log(0.1), std::log(50.0)));
      const double s2 = std::exp(rng.uniform(std::log(0.1), std::log(50.0)));
      const std::array<double, 2> xi1 = {s1 * rng.gaussian(), s1 * rng.gaussian()};
      const std::array<double, 2> xi2 = {s2 * rng.gaussian(), s2 * rng.gaussian()};
      if ((xi1[0] == 0.0 && xi1[1] == 0.0) || (xi2[0] == 0.0 && xi2[1] == 0.0)) continue;
      const int g1 = rng.uniform() < 0.5 ? 1 : -1;
      const int g2 = rng.uniform() < 0.5 ? 1 : -1;
      // mix far-from-cone and near-cone temporal frequencies
      const double k1 = std::hypot(xi1[0], xi1[1]);
      const double k2 = std::hypot(xi2[0], xi2[1]);
      const double tau1 = rng.uniform() < 0.5 ? s1 * rng.gaussian()
                                              : -g1 * k1 + 0.1 * rng.gaussian();
      const double tau2 = rng.uniform() < 0.5 ? s2 * rng.gaussian()
                                              : -g2 * k2 + 0.1 * rng.gaussian();
      const CheckPair c = angle_bound_check(xi1, tau1, g1, xi2, tau2, g2, ec.epsilon);
      if (c.rhs > 0.0) sup_ratio = std::max(sup_ratio, c.lhs / c.rhs);
    }
    row("angle_bound", "sup_ratio", 0, static_cast<long>(base_seed), sup_ratio);
    print_line(quiet, "angle bound: sup LHS/RHS = %.6f over %ld samples", sup_ratio,
               ec.pointwise_samples);
  }

  // empirical constants of the space-time estimates across resolutions,
  // fixed physical band (the acceptance protocol) ...
  const Inequality studied[] = {Inequality::Str, Inequality::T};
  const char* names[] = {"Str", "T"};
  for (int q = 0; q < 2; ++q) {
    std::vector<double> max_ratio;
    for (int n : ec.resolutions) {
      TorusGrid grid(n, cfg.grid_length);
      FreeWaveSpec spec;
      spec.band_lo = ec.band_lo;
      spec.band_hi = ec.band_hi;
      spec.t_span = ec.t_span;
      spec.nt = ec.nt;
      double worst = 0.0;
      for (int b = 0; b < ec.batch; ++b) {
        const uint64_t seed = base_seed + static_cast<uint64_t>(b);
        const SpaceTimeSample u = free_wave_sample(grid, spec, seed);
        const double ratio = estimate_ratio(u, studied[q], ec.epsilon);
        row("ratio", names[q], n, static_cast<long>(seed), ratio);
        worst = std::max(worst, ratio);
      }
      row("ratio_max", names[q], n, static_cast<long>(base_seed), worst);
      max_ratio.push_back(worst);
      print_line(quiet, "(%s) n = %3d: max ratio over %d seeds = %.6f", names[q], n,
                 ec.batch, worst);
    }
    for (size_t i = 1; i < max_ratio.size(); ++i) {
      const double growth = max_ratio[i] / max_ratio[i - 1];
      print_line(quiet, "(%s) growth %d -> %d: %.4f", names[q],
                 ec.resolutions[i - 1], ec.resolutions[i], growth);
    }
  }

  // ... and a band that scales with the grid, as a stiffer probe
  for (int q = 0; q < 2; ++q) {
    for (int n : ec.resolutions) {
      TorusGrid grid(n, cfg.grid_length);
      FreeWaveSpec spec;
      spec.band_lo = std::max(1.0, n / 8.0);
      spec.band_hi = n / 4.0;
      spec.t_span = ec.t_span;
      spec.nt = ec.nt;
      double worst = 0.0;
      const int batch = std::max(1, ec.batch / 4);
      for (int b = 0; b < batch; ++b) {
        const SpaceTimeSample u =
            free_wave_sample(grid, spec, base_seed + 7000 + static_cast<uint64_t>(b));
        worst = std::max(worst, estimate_ratio(u, studied[q], ec.epsilon));
      }
      row("ratio_max_scaled_band", names[q], n, static_cast<long>(base_seed), worst);
      print_line(quiet, "(%s, band ~ n) n = %3d: max ratio = %.6f", names[q], n, worst);
    }
  }

  // modulation-weight ordering between the half-wave and wave families
  {
    TorusGrid grid(64, cfg.grid_length);
    FreeWaveSpec spec;
    spec.band_lo = ec.band_lo;
    spec.band_hi = ec.band_hi;
    spec.t_span = ec.t_span;
    spec.nt = ec.nt;
    long violations = 0;
    for (int b = 0; b < ec.batch; ++b) {
      const SpaceTimeSample u =
          free_wave_sample(grid, spec, base_seed + 9000 + static_cast<uint64_t>(b));
      for (double bb : {0.5, -0.5}) {
        const double wave = xsb_norm(u, {XFamily::x_wave, 0.0, bb});
        const double plus = xsb_norm(u, {XFamily::x_plus, 0.0, bb});
        const double minus = xsb_norm(u, {XFamily::x_minus, 0.0, bb});
        if (bb >= 0.0) {
          if (plus < wave || minus < wave) ++violations;
        } else {
          if (plus > wave || minus > wave) ++violations;
        }
      }
    }
    row("norm_ordering", "violations", 64, static_cast<long>(base_seed),
        static_cast<double>(violations));
    print_line(quiet, "norm ordering: %ld violations over %d samples", violations,
               ec.batch);
  }
  return 0;
}

int run_gauge_demo(const RunConfig& cfg, bool quiet) {
  fs::create_directories(cfg.out_dir);
  const CSHState initial = build_initial_state(cfg);
  const TorusGrid& grid = initial.grid();
  const Potential v = cfg.potential();

  // fixed smooth low-mode gauge function
  const int n = grid.n();
  ScalarField chi_field(grid, Rep::physical);
  for (int iy = 0; iy < n; ++iy) {
    const double y = iy * grid.dx();
    for (int ix = 0; ix < n; ++ix) {
      const double x = ix * grid.dx();
      chi_field.at(ix, iy) =
          0.2 * (std::cos(2.0 * M_PI * x / grid.length()) +
                 0.5 * std::sin(4.0 * M_PI * y / grid.length()));
    }
  }
  const GaugeFunction chi{chi_field};

  const Trajectory base = evolve(initial, cfg.scheme, v, cfg.diag_options());
  const Trajectory transformed =
      evolve(apply_gauge(initial, chi), cfg.scheme, v, cfg.diag_options());

  std::ofstream csv(fs::path(cfg.out_dir) / "gauge_demo.csv");
  if (!csv) throw Error("cannot open gauge_demo.csv for writing");
  csv << "t,commute_phi_sup,commute_gauge_sup,energy_dev,i_dev,constraint_dev\n";
  char buf[256];
  double worst_commute = 0.0, worst_inv = 0.0;
  for (size_t i = 0; i < base.states.size(); ++i) {
    const CSHState swapped = apply_gauge(base.states[i], chi);
    const CSHState& other = transformed.states[i];
    const double dphi = sup_norm_difference(swapped.phi(), other.phi());
    GaugeField ga = swapped.assembled_gauge();
    GaugeField gb = other.assembled_gauge();
    const double dgauge = std::max(sup_norm_difference(ga.x, gb.x),
                                   sup_norm_difference(ga.y, gb.y));
    const DiagnosticsRecord rec = record(swapped, v, cfg.diag_options());
    const DiagnosticsRecord& ref = base.records[i];
    const double de = std::abs(rec.energy - ref.energy);
    const double di = std::abs(rec.i_value - ref.i_value);
    const double dc = std::abs(rec.constraint_l2 - ref.constraint_l2);
    std::snprintf(buf, sizeof buf, "%.17g,%.3e,%.3e,%.3e,%.3e,%.3e\n",
                  base.times[i], dphi, dgauge, de, di, dc);
    csv << buf;
    worst_commute = std::max({worst_commute, dphi, dgauge});
    worst_inv = std::max({worst_inv, de, di, dc});
  }

  // Coulomb-type fixing on the initial data
  GaugeField a0 = initial.assembled_gauge();
  const GaugeFunction cchi = coulomb_chi(a0);
  const CSHState fixed = apply_gauge(initial, cchi);
  const GaugeField cf_after = fixed.curl_free_part();
  const double cf_residual = std::hypot(l2_norm(cf_after.x), l2_norm(cf_after.y));

  print_line(quiet, "flow commutation: max deviation %.3e", worst_commute);
  print_line(quiet, "gauge invariance of E, I, constraint: max deviation %.3e", worst_inv);
  print_line(quiet, "coulomb fixing: residual curl-free part L2 = %.3e", cf_residual);
  return (base.blew_up || transformed.blew_up) ? 2 : 0;
}

int run_check(const std::string& snapshot_path, const Potential& v, bool quiet) {
  const CSHState s = read_snapshot(snapshot_path);
  const DiagnosticsRecord r = record(s, v);
  print_line(quiet, "snapshot: n = %d  L = %.17g  t = %.17g", s.grid().n(),
             s.grid().length(), s.time());
  print_line(quiet, "energy = %.17g", r.energy);
  print_line(quiet, "constraint residual L2 = %.3e", r.constraint_l2);
  print_line(quiet, "I = %.17g", r.i_value);
  print_line(quiet, "phi: L2 = %.17g  H1 = %.17g  phi_t L2 = %.17g", r.phi_l2,
             r.phi_h1, r.phit_l2);
  print_line(quiet, "gauge class norms: cf = %.17g  df = %.17g", r.acf_norm,
             r.adf_norm);
  return 0;
}

}  // namespace csh
