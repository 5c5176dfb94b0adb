#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csh/dynamics.hpp"

namespace csh {

enum class InitialKind { zero, plane_wave, gaussian_bump, random_band, from_snapshot };

struct InitialConfig {
  InitialKind kind = InitialKind::zero;
  uint64_t seed = 1;
  double amplitude = 0.5;
  int mode_x = 1, mode_y = 0;          // plane-wave
  double width = 0.8;                  // gaussian-bump
  double center_x = 0.5, center_y = 0.5;  // bump center, relative to L
  int band = 7;                        // random-band mode cutoff
  double acf_amplitude = 0.0;          // free curl-free gauge part
  double mean_x = 0.0, mean_y = 0.0;   // k = 0 mode of A
  std::string snapshot_path;
};

struct EstimatesConfig {
  double epsilon = 0.01;  // realization of every "+" exponent
  double t_span = 2.0;
  int nt = 64;
  int batch = 100;
  double band_lo = 2.0;
  double band_hi = 8.0;
  long pointwise_samples = 1000000;
  std::vector<int> resolutions = {32, 64, 128};
};

struct DiagnosticsConfig {
  double norm_epsilon = 0.1;
  bool linear_exact = false;  // report the closed-form error of the test mode
};

struct RunConfig {
  int grid_n = 64;
  double grid_length = 2.0 * M_PI;
  SchemeConfig scheme;
  std::vector<double> potential_coeffs = {0.0, 1.0};  // V(r) = sum c_k r^k
  double alpha = 1.0;
  InitialConfig initial;
  DiagnosticsConfig diagnostics;
  EstimatesConfig estimates;
  std::string out_dir = "out";

  Potential potential() const { return Potential(potential_coeffs, alpha); }
  DiagnosticsOptions diag_options() const { return {diagnostics.norm_epsilon}; }
};

// Line-oriented key = value text with [section] headers and '#' comments.
// Unknown keys, missing required keys (grid.n, scheme.dt, scheme.t_end) and
// out-of-range values are rejected with the offending line number.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Canonical text with every default resolved; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& cfg);

}  // namespace csh
