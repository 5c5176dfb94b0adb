#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "csh/errors.hpp"
#include "csh/io.hpp"
#include "csh/kernels.hpp"

namespace {

csh::RunConfig load(const std::string& path, const std::string& out_override,
                    long seed_override) {
  csh::RunConfig cfg = csh::parse_config_file(path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (seed_override >= 0) cfg.initial.seed = static_cast<uint64_t>(seed_override);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral Chern-Simons-Higgs simulator on the periodic torus"};
  app.require_subcommand(1);

  std::string config_path, snapshot_path, out_dir, check_config;
  long seed = -1;
  bool quiet = false;
  bool serial = false;
  app.add_flag("--quiet", quiet, "suppress the stdout summary");
  app.add_flag("--serial", serial, "run on the serial reference kernels");

  auto* run = app.add_subcommand("run", "evolve a configured initial state");
  run->add_option("config", config_path, "run configuration file")->required();
  run->add_option("--out", out_dir, "output directory override");
  run->add_option("--seed", seed, "seed override");

  auto* est = app.add_subcommand("estimates", "space-time norm and inequality studies");
  est->add_option("config", config_path, "run configuration file")->required();
  est->add_option("--out", out_dir, "output directory override");
  est->add_option("--seed", seed, "seed override");

  auto* gd = app.add_subcommand("gauge-demo", "gauge covariance experiment");
  gd->add_option("config", config_path, "run configuration file")->required();
  gd->add_option("--out", out_dir, "output directory override");
  gd->add_option("--seed", seed, "seed override");

  auto* chk = app.add_subcommand("check", "constraint/energy report for a snapshot");
  chk->add_option("snapshot", snapshot_path, "snapshot file")->required();
  chk->add_option("--config", check_config, "config supplying the potential");

  CLI11_PARSE(app, argc, argv);

  if (serial) csh::kernels::set_backend(csh::kernels::Backend::serial);

  try {
    if (app.got_subcommand(run))
      return csh::run_simulation(load(config_path, out_dir, seed), quiet);
    if (app.got_subcommand(est))
      return csh::run_estimates(load(config_path, out_dir, seed), quiet);
    if (app.got_subcommand(gd))
      return csh::run_gauge_demo(load(config_path, out_dir, seed), quiet);
    if (app.got_subcommand(chk)) {
      csh::Potential v;
      if (!check_config.empty()) v = csh::parse_config_file(check_config).potential();
      return csh::run_check(snapshot_path, v, quiet);
    }
  } catch (const csh::BlowUpError& e) {
    std::fprintf(stderr, "error: %s (t = %.17g)\n", e.what(), e.t);
    return 2;
  } catch (const csh::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
