#pragma once

// Experiment sweeps, verification suites and their persisted outputs.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtrl/bounds.hpp"
#include "mtrl/config.hpp"

namespace mtrl {

inline constexpr const char* kVersion = "0.1.0";

struct ResultRow {
  std::string method;  // itl | mtl | ltl
  Index n = 0, T = 0, trial = 0;
  double test_error = 0.0;
  double training_error = 0.0;
  std::optional<double> similarity;
  double seconds = 0.0;  // 0 unless timing is recorded
};

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

struct CellSummary {
  Index n = 0, T = 0;
  Index trials = 0;  // trials that completed
  MeanSe baseline;   // ITL test error
  MeanSe method;     // MTL or LTL test error
  MeanSe difference; // baseline - method, per trial
  MeanSe training_error;
  std::optional<MeanSe> similarity;
};

struct SweepResult {
  std::string kind;  // "mtl" or "ltl"
  std::vector<ResultRow> rows;
  std::vector<CellSummary> cells;  // n-major over (n_grid, T_grid)
  std::vector<std::string> failures;

  const CellSummary& cell(Index n, Index T) const;
};

/// ITL vs jointly trained MTL on every (n, T, trial).
SweepResult run_mtl_sweep(const SweepConfig& config);

/// ITL vs a dictionary learned on T tasks and adapted to new tasks.
SweepResult run_ltl_sweep(const SweepConfig& config);

/// Header method,n,T,trial,test_error,training_error,similarity,seconds.
void write_rows_csv(const std::vector<ResultRow>& rows, std::ostream& os);

nlohmann::json sweep_summary_json(const SweepResult& result, const SweepConfig& config);

PhaseDiagram run_phase_diagram(const SweepConfig& config);
nlohmann::json phase_summary_json(const PhaseDiagram& diagram, const SweepConfig& config);

struct ComplexityInstance {
  Index index = 0, d = 0, K = 0, n = 0, T = 0;
  double estimate = 0.0, std_error = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound + 3 se - estimate
  bool gaussian_pass = false;
  double search_gap = 0.0;  // max over checks of random-search value - closed form
  bool search_pass = false;
  double sup_norm = 0.0, eigen_oracle = 0.0;
  double sup_norm_search_max = 0.0;
  bool sup_pass = false;

  bool pass() const { return gaussian_pass && search_pass && sup_pass; }
};

struct ComplexityReport {
  std::vector<ComplexityInstance> instances;
  bool all_pass() const;
};

/// Monte-Carlo and oracle checks of the linear-class complexity bounds on
/// randomized instances (d <= 20, K <= 3, n, T <= 8).
ComplexityReport verify_complexity(const SweepConfig& config);
void write_complexity_csv(const ComplexityReport& report, std::ostream& os);
nlohmann::json complexity_summary_json(const ComplexityReport& report, const SweepConfig& config);

struct LowerBoundReport {
  Index d = 0, n = 0, trials = 0;
  double delta = 0.0;
  double lower = 0.0;
  bool vacuous = false;
  Index violations = 0;
  double violation_fraction = 0.0;
  double allowed_fraction = 0.0;  // delta + 3 binomial standard deviations
  double mean_err = 0.0;
  std::vector<double> errors;

  bool pass() const { return violation_fraction <= allowed_fraction; }
};

/// Zero-initialized ITL on uniform-sphere half-space tasks compared per trial
/// with the equivariant lower bound.
LowerBoundReport simulate_lower_bound(const SweepConfig& config);
nlohmann::json lower_bound_json(const LowerBoundReport& report, const SweepConfig& config);

}  // namespace mtrl
