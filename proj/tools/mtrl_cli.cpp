// Command-line front end: sweeps, phase diagram and verification suites.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "mtrl/error.hpp"
#include "mtrl/harness.hpp"

namespace fs = std::filesystem;

namespace {

fs::path output_path(const mtrl::SweepConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return fs::path(cfg.out_dir) / name;
}

void write_json(const mtrl::SweepConfig& cfg, const std::string& name, const nlohmann::json& j) {
  std::ofstream os(output_path(cfg, name));
  os << j.dump(2) << '\n';
}

int sweep(const mtrl::SweepConfig& cfg, bool ltl) {
  const auto result = ltl ? mtrl::run_ltl_sweep(cfg) : mtrl::run_mtl_sweep(cfg);
  const std::string kind = result.kind;
  {
    std::ofstream os(output_path(cfg, kind + "_results.csv"));
    mtrl::write_rows_csv(result.rows, os);
  }
  write_json(cfg, kind + "_summary.json", mtrl::sweep_summary_json(result, cfg));
  std::printf("%6s %6s %10s %10s %10s\n", "n", "T", "itl", kind.c_str(), "diff");
  for (const auto& c : result.cells)
    std::printf("%6ld %6ld %10.4f %10.4f %10.4f\n", static_cast<long>(c.n), static_cast<long>(c.T),
                c.baseline.mean, c.method.mean, c.difference.mean);
  for (const auto& f : result.failures) std::fprintf(stderr, "cell failed: %s\n", f.c_str());
  return 0;
}

int phase(const mtrl::SweepConfig& cfg) {
  const auto diagram = mtrl::run_phase_diagram(cfg);
  {
    std::ofstream os(output_path(cfg, "phase_diagram.csv"));
    mtrl::write_phase_csv(diagram, os);
  }
  write_json(cfg, "phase_summary.json", mtrl::phase_summary_json(diagram, cfg));
  std::printf("cells=%zu positive=%zu (K=%g, d=%g, delta=%g)\n", diagram.cells.size(),
              diagram.positive_count(), diagram.K, diagram.d, diagram.delta);
  return 0;
}

int verify(const mtrl::SweepConfig& cfg) {
  const auto report = mtrl::verify_complexity(cfg);
  {
    std::ofstream os(output_path(cfg, "complexity_report.csv"));
    mtrl::write_complexity_csv(report, os);
  }
  write_json(cfg, "complexity_summary.json", mtrl::complexity_summary_json(report, cfg));
  for (const auto& i : report.instances)
    std::printf("instance %2ld d=%2ld K=%ld n=%ld T=%ld  G=%.4f±%.4f bound=%.4f  %s\n",
                static_cast<long>(i.index), static_cast<long>(i.d), static_cast<long>(i.K),
                static_cast<long>(i.n), static_cast<long>(i.T), i.estimate, i.std_error, i.bound,
                i.pass() ? "pass" : "FAIL");
  return report.all_pass() ? 0 : 1;
}

int lower_bound(const mtrl::SweepConfig& cfg) {
  const auto report = mtrl::simulate_lower_bound(cfg);
  write_json(cfg, "lower_bound_report.json", mtrl::lower_bound_json(report, cfg));
  {
    std::ofstream os(output_path(cfg, "lower_bound_errors.csv"));
    os << "trial,err\n";
    for (std::size_t t = 0; t < report.errors.size(); ++t) os << t << ',' << report.errors[t] << '\n';
  }
  std::printf("lower=%.6f%s violations=%ld/%ld (%.4f, allowed %.4f) mean_err=%.4f\n", report.lower,
              report.vacuous ? " (vacuous)" : "", static_cast<long>(report.violations),
              static_cast<long>(report.trials), report.violation_fraction, report.allowed_fraction,
              report.mean_err);
  return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multitask subspace representation learning experiments and bounds"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<long> workers;
  std::optional<long> trials;
  app.add_option("--config", config_file, "key=value configuration file");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--out-dir", out_dir, "output directory (env MTRL_OUT_DIR)");
  app.add_option("--workers", workers, "worker threads");
  app.add_option("--trials", trials, "trials per cell");

  const std::set<std::string> covered = {"master_seed", "out_dir", "workers", "trials"};
  std::map<std::string, std::string> overrides;
  for (const auto& key : mtrl::config_keys()) {
    if (covered.count(key)) continue;
    app.add_option("--" + key, overrides[key], "config key " + key);
  }

  auto* sweep_mtl = app.add_subcommand("sweep-mtl", "ITL vs MTL test error over (n, T)");
  auto* sweep_ltl = app.add_subcommand("sweep-ltl", "ITL vs LTL on new tasks over (n, T)");
  auto* phase_cmd = app.add_subcommand("phase-diagram", "LTL advantage over equivariant ITL");
  auto* verify_cmd = app.add_subcommand("verify-bounds", "Monte-Carlo checks of complexity bounds");
  auto* lower_cmd = app.add_subcommand("lower-bound-sim", "Equivariant ITL vs its lower bound");

  CLI11_PARSE(app, argc, argv);

  mtrl::SweepConfig cfg;
  try {
    if (!config_file.empty()) mtrl::load_config_file(cfg, config_file);
    if (const char* env = std::getenv("MTRL_OUT_DIR"); env && *env) cfg.out_dir = env;
    for (const auto& [key, value] : overrides)
      if (app.count("--" + key) > 0) mtrl::apply_setting(cfg, key, value);
    if (seed) cfg.master_seed = *seed;
    if (out_dir) cfg.out_dir = *out_dir;
    if (workers) cfg.workers = *workers;
    if (trials) cfg.trials = *trials;
    cfg.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return 2;
  }

  try {
    if (*sweep_mtl) return sweep(cfg, false);
    if (*sweep_ltl) return sweep(cfg, true);
    if (*phase_cmd) return phase(cfg);
    if (*verify_cmd) return verify(cfg);
    if (*lower_cmd) return lower_bound(cfg);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
