#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtrl/trainers.hpp"

namespace mtrl {

enum class MarginPolicy {
  TwoEps,     // c = 2 eps
  TwoOverEps  // c = 2 / eps
};

/// Every experiment setting. Field names double as config-file keys and CLI
/// flags (see config_keys()).
struct SweepConfig {
  // Sweeps.
  Index d = 50;
  Index k_true = 2;
  Index k_model = 2;
  std::vector<Index> n_grid;
  std::vector<Index> T_grid;
  Index trials = 10;
  double noise_std = 0.0;
  std::optional<double> input_radius;  // defaults to sqrt(d)
  Index test_size = 1000;
  Index new_task_count = 50;
  std::uint64_t master_seed = 1;
  OptimizerParams optimizer;
  MarginPolicy margin_policy = MarginPolicy::TwoEps;
  double itl_radius = 1.0;
  std::string out_dir = ".";
  Index workers = 1;
  bool record_timing = false;

  // Phase diagram.
  double phase_d = 1e5;
  double phase_k = 2;
  double phase_delta = 1e-4;
  double phase_n_min = 1, phase_n_max = 1e5;
  double phase_t_min = 1, phase_t_max = 1e11;
  Index phase_n_points = 100;
  Index phase_t_points = 100;
  bool phase_split_delta = false;
  bool phase_exact_eps = false;

  // Complexity verification.
  Index verify_instances = 20;
  Index verify_mc_samples = 2000;
  Index verify_search_dicts = 500;
  Index verify_search_draws = 5;

  // Equivariant lower-bound simulation.
  Index sim_d = 200;
  Index sim_n = 50;
  double sim_delta = 0.05;
  Index sim_trials = 500;
  double sim_margin = 1.0;
  double sim_input_radius = 1.0;

  SweepConfig();
  void validate() const;
  double input_radius_or_default() const;
  /// Training margin for sample size n under the margin policy.
  double margin(Index n) const;
};

/// Names accepted by apply_setting, in a stable order.
const std::vector<std::string>& config_keys();

/// Parses `value` into the field named `key`. Grids accept "5,10,20" or
/// "start:stop:step". Throws InvalidParameter on unknown keys or bad values.
void apply_setting(SweepConfig& config, std::string_view key, std::string_view value);

/// Reads flat key=value lines; '#' starts a comment.
void load_config_file(SweepConfig& config, const std::filesystem::path& path);

/// key=value text for every key; load_config_file of it restores the config.
std::string dump_config(const SweepConfig& config);

}  // namespace mtrl
