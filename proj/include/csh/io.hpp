#pragma once

#include <string>
#include <vector>

#include "csh/config.hpp"
#include "csh/diagnostics.hpp"
#include "csh/state.hpp"

namespace csh {

// Snapshot layout (little-endian, row-major samples):
//   "CSH1"  u32 n  f64 L  f64 t
//   n^2 x (f64 re, f64 im)  phi
//   n^2 x (f64 re, f64 im)  phi_t
//   n^2 x f64               A_1   (assembled mean-free gauge field)
//   n^2 x f64               A_2
//   2 x f64                 A mean
// A file round trip is bit-exact; the state read back stores the gauge block
// verbatim (full-field form), so write(read(f)) reproduces f byte for byte.
void write_snapshot(const CSHState& state, const std::string& path);
CSHState read_snapshot(const std::string& path);

// CSV with header t,energy,constraint_l2,I,phi_l2,phi_h1,phit_l2,acf_norm,adf_norm
// at full double precision (17 significant digits).
void write_diagnostics(const std::vector<DiagnosticsRecord>& series,
                       const std::string& path);
std::vector<DiagnosticsRecord> read_diagnostics(const std::string& path);

// Initial data per the config's generator; when the gauge coupling is on the
// result goes through the compatibility constructor and inherits its checks.
CSHState build_initial_state(const RunConfig& cfg);

// Subcommand drivers; each returns the process exit status
// (0 success, 1 config/data error, 2 blow-up).
int run_simulation(const RunConfig& cfg, bool quiet);
int run_estimates(const RunConfig& cfg, bool quiet);
int run_gauge_demo(const RunConfig& cfg, bool quiet);
int run_check(const std::string& snapshot_path, const Potential& v, bool quiet);

}  // namespace csh
