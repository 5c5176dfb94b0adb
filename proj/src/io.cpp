#include "csh/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "csh/errors.hpp"

namespace csh {

namespace {

void put_u32(std::ostream& o, uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  o.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& o, double d) {
  const uint64_t v = std::bit_cast<uint64_t>(d);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  o.write(reinterpret_cast<const char*>(b), 8);
}

uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw FormatError("snapshot truncated");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw FormatError("snapshot truncated");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

constexpr char kMagic[4] = {'C', 'S', 'H', '1'};

}  // namespace

void write_snapshot(const CSHState& state, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(kMagic, 4);
  const int n = state.grid().n();
  put_u32(out, static_cast<uint32_t>(n));
  put_f64(out, state.grid().length());
  put_f64(out, state.time());
  const ScalarField& phi = state.phi();
  const ScalarField& phi_t = state.phi_t();
  for (size_t i = 0; i < phi.size(); ++i) {
    put_f64(out, phi[i].real());
    put_f64(out, phi[i].imag());
  }
  for (size_t i = 0; i < phi_t.size(); ++i) {
    put_f64(out, phi_t[i].real());
    put_f64(out, phi_t[i].imag());
  }
  const GaugeField& a = state.assembled_gauge();
  for (size_t i = 0; i < a.x.size(); ++i) put_f64(out, a.x[i].real());
  for (size_t i = 0; i < a.y.size(); ++i) put_f64(out, a.y[i].real());
  put_f64(out, state.a_mean()[0]);
  put_f64(out, state.a_mean()[1]);
  if (!out) throw Error("write to '" + path + "' failed");
}

CSHState read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open snapshot '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("bad snapshot magic in '" + path + "'");
  const uint32_t n = get_u32(in);
  if (n < 4 || n % 2 != 0 || n > 65536)
    throw FormatError("snapshot declares an unusable grid size");
  const double length = get_f64(in);
  if (!(length > 0.0)) throw FormatError("snapshot declares a non-positive period");
  const double t = get_f64(in);

  TorusGrid grid(static_cast<int>(n), length);
  ScalarField phi(grid, Rep::physical), phi_t(grid, Rep::physical);
  GaugeField gauge(grid, Rep::physical);
  for (size_t i = 0; i < phi.size(); ++i) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    phi[i] = {re, im};
  }
  for (size_t i = 0; i < phi_t.size(); ++i) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    phi_t[i] = {re, im};
  }
  for (size_t i = 0; i < gauge.x.size(); ++i) gauge.x[i] = get_f64(in);
  for (size_t i = 0; i < gauge.y.size(); ++i) gauge.y[i] = get_f64(in);
  std::array<double, 2> mean{};
  mean[0] = get_f64(in);
  mean[1] = get_f64(in);
  in.peek();
  if (!in.eof()) throw FormatError("snapshot has trailing bytes");
  return CSHState(t, std::move(phi), std::move(phi_t), std::move(gauge), mean,
                  GaugeStorage::full_field);
}

void write_diagnostics(const std::vector<DiagnosticsRecord>& series,
                       const std::string& path) {
  if (series.empty()) throw UsageError("write_diagnostics needs a nonempty series");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "t,energy,constraint_l2,I,phi_l2,phi_h1,phit_l2,acf_norm,adf_norm\n";
  char buf[512];
  for (const auto& r : series) {
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.t, r.energy, r.constraint_l2, r.i_value, r.phi_l2, r.phi_h1,
                  r.phit_l2, r.acf_norm, r.adf_norm);
    out << buf;
  }
  if (!out) throw Error("write to '" + path + "' failed");
}

std::vector<DiagnosticsRecord> read_diagnostics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open diagnostics CSV '" + path + "'");
  std::string header;
  if (!std::getline(in, header) ||
      header != "t,energy,constraint_l2,I,phi_l2,phi_h1,phit_l2,acf_norm,adf_norm")
    throw FormatError("unexpected diagnostics CSV header");
  std::vector<DiagnosticsRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    DiagnosticsRecord r;
    double* cols[9] = {&r.t,      &r.energy,  &r.constraint_l2,
                       &r.i_value, &r.phi_l2, &r.phi_h1,
                       &r.phit_l2, &r.acf_norm, &r.adf_norm};
    std::istringstream ls(line);
    std::string tok;
    for (int c = 0; c < 9; ++c) {
      if (!std::getline(ls, tok, ',')) throw FormatError("short diagnostics row");
      *cols[c] = std::strtod(tok.c_str(), nullptr);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace csh
