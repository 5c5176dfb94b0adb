#include "csh/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "csh/errors.hpp"

namespace csh {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ParseError("expected a boolean, got '" + v + "'", line);
}

double parse_double(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + v + "'", line);
  }
}

long parse_long(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + v + "'", line);
  }
}

std::vector<double> parse_double_list(const std::string& v, int line) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string tok;
  while (is >> tok) out.push_back(parse_double(tok, line));
  return out;
}

std::vector<int> parse_int_list(const std::string& v, int line) {
  std::vector<int> out;
  std::istringstream is(v);
  std::string tok;
  while (is >> tok) out.push_back(static_cast<int>(parse_long(tok, line)));
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* formulation_name(Formulation f) {
  switch (f) {
    case Formulation::direct: return "direct";
    case Formulation::reformulated: return "reformulated";
    case Formulation::halfwave: return "halfwave";
  }
  return "?";
}

const char* initial_name(InitialKind k) {
  switch (k) {
    case InitialKind::zero: return "zero";
    case InitialKind::plane_wave: return "plane-wave";
    case InitialKind::gaussian_bump: return "gaussian-bump";
    case InitialKind::random_band: return "random-band";
    case InitialKind::from_snapshot: return "from-snapshot";
  }
  return "?";
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  bool seen_n = false, seen_dt = false, seen_tend = false;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "grid" && section != "scheme" && section != "potential" &&
          section != "initial" && section != "output" && section != "estimates" &&
          section != "diagnostics")
        throw ParseError("unknown section [" + section + "]", line_no);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) throw ParseError("empty key or value", line_no);
    const std::string full = section + "." + key;

    if (full == "grid.n") {
      cfg.grid_n = static_cast<int>(parse_long(val, line_no));
      if (cfg.grid_n < 4 || cfg.grid_n % 2 != 0)
        throw ParseError("grid.n must be even and >= 4", line_no);
      seen_n = true;
    } else if (full == "grid.L") {
      cfg.grid_length = parse_double(val, line_no);
      if (!(cfg.grid_length > 0.0)) throw ParseError("grid.L must be positive", line_no);
    } else if (full == "scheme.formulation") {
      if (val == "direct") cfg.scheme.formulation = Formulation::direct;
      else if (val == "reformulated") cfg.scheme.formulation = Formulation::reformulated;
      else if (val == "halfwave") cfg.scheme.formulation = Formulation::halfwave;
      else throw ParseError("unknown formulation '" + val + "'", line_no);
    } else if (full == "scheme.dt") {
      cfg.scheme.dt = parse_double(val, line_no);
      if (!(cfg.scheme.dt > 0.0)) throw ParseError("scheme.dt must be positive", line_no);
      seen_dt = true;
    } else if (full == "scheme.t_end") {
      cfg.scheme.t_end = parse_double(val, line_no);
      if (cfg.scheme.t_end < 0.0) throw ParseError("scheme.t_end must be >= 0", line_no);
      seen_tend = true;
    } else if (full == "scheme.stride") {
      cfg.scheme.record_stride = static_cast<int>(parse_long(val, line_no));
      if (cfg.scheme.record_stride < 1)
        throw ParseError("scheme.stride must be >= 1", line_no);
    } else if (full == "scheme.dealias") {
      cfg.scheme.dealias = parse_bool(val, line_no);
    } else if (full == "scheme.gauge_coupling") {
      cfg.scheme.gauge_coupling = parse_bool(val, line_no);
    } else if (full == "scheme.potential_on") {
      cfg.scheme.potential_on = parse_bool(val, line_no);
    } else if (full == "potential.coeffs") {
      cfg.potential_coeffs = parse_double_list(val, line_no);
      // canonical form: no trailing zero coefficients ("0" means V = 0)
      while (!cfg.potential_coeffs.empty() && cfg.potential_coeffs.back() == 0.0)
        cfg.potential_coeffs.pop_back();
    } else if (full == "potential.alpha") {
      cfg.alpha = parse_double(val, line_no);
      if (cfg.alpha < 0.0) throw ParseError("potential.alpha must be >= 0", line_no);
    } else if (full == "initial.type") {
      if (val == "zero") cfg.initial.kind = InitialKind::zero;
      else if (val == "plane-wave") cfg.initial.kind = InitialKind::plane_wave;
      else if (val == "gaussian-bump") cfg.initial.kind = InitialKind::gaussian_bump;
      else if (val == "random-band") cfg.initial.kind = InitialKind::random_band;
      else if (val == "from-snapshot") cfg.initial.kind = InitialKind::from_snapshot;
      else throw ParseError("unknown initial data type '" + val + "'", line_no);
    } else if (full == "initial.seed") {
      cfg.initial.seed = static_cast<uint64_t>(parse_long(val, line_no));
    } else if (full == "initial.amplitude") {
      cfg.initial.amplitude = parse_double(val, line_no);
    } else if (full == "initial.mode_x") {
      cfg.initial.mode_x = static_cast<int>(parse_long(val, line_no));
    } else if (full == "initial.mode_y") {
      cfg.initial.mode_y = static_cast<int>(parse_long(val, line_no));
    } else if (full == "initial.width") {
      cfg.initial.width = parse_double(val, line_no);
      if (!(cfg.initial.width > 0.0)) throw ParseError("initial.width must be positive", line_no);
    } else if (full == "initial.center_x") {
      cfg.initial.center_x = parse_double(val, line_no);
    } else if (full == "initial.center_y") {
      cfg.initial.center_y = parse_double(val, line_no);
    } else if (full == "initial.band") {
      cfg.initial.band = static_cast<int>(parse_long(val, line_no));
      if (cfg.initial.band < 1) throw ParseError("initial.band must be >= 1", line_no);
    } else if (full == "initial.acf_amplitude") {
      cfg.initial.acf_amplitude = parse_double(val, line_no);
    } else if (full == "initial.mean_x") {
      cfg.initial.mean_x = parse_double(val, line_no);
    } else if (full == "initial.mean_y") {
      cfg.initial.mean_y = parse_double(val, line_no);
    } else if (full == "initial.snapshot") {
      cfg.initial.snapshot_path = val;
    } else if (full == "output.dir") {
      cfg.out_dir = val;
    } else if (full == "estimates.epsilon") {
      cfg.estimates.epsilon = parse_double(val, line_no);
      if (!(cfg.estimates.epsilon > 0.0))
        throw ParseError("estimates.epsilon must be positive", line_no);
    } else if (full == "estimates.T") {
      cfg.estimates.t_span = parse_double(val, line_no);
      if (!(cfg.estimates.t_span > 0.0)) throw ParseError("estimates.T must be positive", line_no);
    } else if (full == "estimates.nt") {
      cfg.estimates.nt = static_cast<int>(parse_long(val, line_no));
      if (cfg.estimates.nt < 8) throw ParseError("estimates.nt must be >= 8", line_no);
    } else if (full == "estimates.batch") {
      cfg.estimates.batch = static_cast<int>(parse_long(val, line_no));
      if (cfg.estimates.batch < 1) throw ParseError("estimates.batch must be >= 1", line_no);
    } else if (full == "estimates.band_lo") {
      cfg.estimates.band_lo = parse_double(val, line_no);
    } else if (full == "estimates.band_hi") {
      cfg.estimates.band_hi = parse_double(val, line_no);
    } else if (full == "estimates.samples") {
      cfg.estimates.pointwise_samples = parse_long(val, line_no);
      if (cfg.estimates.pointwise_samples < 1)
        throw ParseError("estimates.samples must be >= 1", line_no);
    } else if (full == "estimates.resolutions") {
      cfg.estimates.resolutions = parse_int_list(val, line_no);
      if (cfg.estimates.resolutions.empty())
        throw ParseError("estimates.resolutions must not be empty", line_no);
    } else if (full == "diagnostics.norm_epsilon") {
      cfg.diagnostics.norm_epsilon = parse_double(val, line_no);
      if (!(cfg.diagnostics.norm_epsilon > 0.0))
        throw ParseError("diagnostics.norm_epsilon must be positive", line_no);
    } else if (full == "diagnostics.linear_exact") {
      cfg.diagnostics.linear_exact = parse_bool(val, line_no);
    } else {
      throw ParseError("unknown key '" + full + "'", line_no);
    }
  }

  if (!seen_n) throw ParseError("missing required key grid.n", 0);
  if (!seen_dt) throw ParseError("missing required key scheme.dt", 0);
  if (!seen_tend) throw ParseError("missing required key scheme.t_end", 0);
  if (cfg.initial.kind == InitialKind::from_snapshot && cfg.initial.snapshot_path.empty())
    throw ParseError("initial.snapshot is required for from-snapshot data", 0);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config file '" + path + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream o;
  o << "[grid]\n";
  o << "n = " << cfg.grid_n << "\n";
  o << "L = " << fmt(cfg.grid_length) << "\n\n";

  o << "[scheme]\n";
  o << "formulation = " << formulation_name(cfg.scheme.formulation) << "\n";
  o << "dt = " << fmt(cfg.scheme.dt) << "\n";
  o << "t_end = " << fmt(cfg.scheme.t_end) << "\n";
  o << "stride = " << cfg.scheme.record_stride << "\n";
  o << "dealias = " << (cfg.scheme.dealias ? "true" : "false") << "\n";
  o << "gauge_coupling = " << (cfg.scheme.gauge_coupling ? "true" : "false") << "\n";
  o << "potential_on = " << (cfg.scheme.potential_on ? "true" : "false") << "\n\n";

  o << "[potential]\n";
  o << "coeffs =";
  if (cfg.potential_coeffs.empty()) o << " 0";
  for (double c : cfg.potential_coeffs) o << " " << fmt(c);
  o << "\n";
  o << "alpha = " << fmt(cfg.alpha) << "\n\n";

  o << "[initial]\n";
  o << "type = " << initial_name(cfg.initial.kind) << "\n";
  o << "seed = " << cfg.initial.seed << "\n";
  o << "amplitude = " << fmt(cfg.initial.amplitude) << "\n";
  o << "mode_x = " << cfg.initial.mode_x << "\n";
  o << "mode_y = " << cfg.initial.mode_y << "\n";
  o << "width = " << fmt(cfg.initial.width) << "\n";
  o << "center_x = " << fmt(cfg.initial.center_x) << "\n";
  o << "center_y = " << fmt(cfg.initial.center_y) << "\n";
  o << "band = " << cfg.initial.band << "\n";
  o << "acf_amplitude = " << fmt(cfg.initial.acf_amplitude) << "\n";
  o << "mean_x = " << fmt(cfg.initial.mean_x) << "\n";
  o << "mean_y = " << fmt(cfg.initial.mean_y) << "\n";
  if (!cfg.initial.snapshot_path.empty())
    o << "snapshot = " << cfg.initial.snapshot_path << "\n";
  o << "\n";

  o << "[output]\n";
  o << "dir = " << cfg.out_dir << "\n\n";

  o << "[estimates]\n";
  o << "epsilon = " << fmt(cfg.estimates.epsilon) << "\n";
  o << "T = " << fmt(cfg.estimates.t_span) << "\n";
  o << "nt = " << cfg.estimates.nt << "\n";
  o << "batch = " << cfg.estimates.batch << "\n";
  o << "band_lo = " << fmt(cfg.estimates.band_lo) << "\n";
  o << "band_hi = " << fmt(cfg.estimates.band_hi) << "\n";
  o << "samples = " << cfg.estimates.pointwise_samples << "\n";
  o << "resolutions =";
  for (int r : cfg.estimates.resolutions) o << " " << r;
  o << "\n\n";

  o << "[diagnostics]\n";
  o << "norm_epsilon = " << fmt(cfg.diagnostics.norm_epsilon) << "\n";
  o << "linear_exact = " << (cfg.diagnostics.linear_exact ? "true" : "false") << "\n";
  return o.str();
}

}  // namespace csh
