#include "mtrl/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include "mtrl/complexity.hpp"
#include "mtrl/metrics.hpp"
#include "mtrl/rng.hpp"
#include "mtrl/synthgen.hpp"
#include "mtrl/trainers.hpp"

namespace mtrl {

namespace {

using Clock = std::chrono::steady_clock;

// Stream tags, so that sweeps and suites never share a stream.
enum : std::uint64_t {
  kTagMtlSweep = 11,
  kTagLtlSweep = 12,
  kTagVerify = 13,
  kTagLowerBound = 14,
};

enum : std::uint64_t {
  kStreamEnv = 0,
  kStreamTrain = 1,
  kStreamTest = 2,
  kStreamInit = 3,
  kStreamNewTasks = 4,
  kStreamNewTrain = 5,
  kStreamNewTest = 6,
};

void parallel_for(Index count, Index workers, const std::function<void(Index)>& body) {
  const Index threads = std::max<Index>(1, std::min(workers, count));
  if (threads == 1) {
    for (Index i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (Index w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (Index i = next++; i < count; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe out;
  if (v.empty()) return out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return out;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct CellKey {
  Index n, T, trial;
};

struct CellOutcome {
  ResultRow baseline;
  ResultRow method;
  std::string error;
};

struct TaskData {
  std::vector<TaskDataset> train;
  std::vector<Matrix> test;
  std::vector<Vector> normals;
};

TaskData sample_tasks(const std::vector<Vector>& normals, const SweepConfig& cfg, Index n,
                      std::uint64_t cell_seed, std::uint64_t train_stream,
                      std::uint64_t test_stream) {
  TaskData out;
  out.normals = normals;
  const double radius = cfg.input_radius_or_default();
  for (std::size_t t = 0; t < normals.size(); ++t) {
    Rng train_rng(derive_seed(cell_seed, {train_stream, t}));
    out.train.push_back(sample_labelled(normals[t], n, radius, cfg.noise_std, train_rng));
    Rng test_rng(derive_seed(cell_seed, {test_stream, t}));
    out.test.push_back(sample_sphere_points(cfg.test_size, cfg.d, radius, test_rng));
  }
  return out;
}

// Mean test error and mean training error of ITL over the given tasks.
std::pair<double, double> run_itl(const TaskData& data, const SweepConfig& cfg, double margin) {
  double test = 0.0, train = 0.0;
  for (std::size_t t = 0; t < data.train.size(); ++t) {
    const LinearFit fit = train_itl(data.train[t], cfg.itl_radius, margin, cfg.optimizer);
    test += test_error(data.normals[t], fit.weights, data.test[t]);
    train += fit.training_error;
  }
  const auto count = static_cast<double>(data.train.size());
  return {test / count, train / count};
}

Environment cell_environment(const SweepConfig& cfg, Index T, std::uint64_t cell_seed) {
  Rng env_rng(derive_seed(cell_seed, {kStreamEnv}));
  return generate_environment(cfg.d, cfg.k_true, T, cfg.noise_std, cfg.input_radius_or_default(),
                              env_rng);
}

CellOutcome mtl_cell(const SweepConfig& cfg, const CellKey& key) {
  const std::uint64_t cell_seed =
      derive_seed(cfg.master_seed, {kTagMtlSweep, static_cast<std::uint64_t>(key.n),
                                    static_cast<std::uint64_t>(key.T),
                                    static_cast<std::uint64_t>(key.trial)});
  const Environment env = cell_environment(cfg, key.T, cell_seed);
  std::vector<Vector> normals;
  for (Index t = 0; t < key.T; ++t) normals.push_back(env.task_vector(t));
  const TaskData data = sample_tasks(normals, cfg, key.n, cell_seed, kStreamTrain, kStreamTest);
  const double margin = cfg.margin(key.n);

  CellOutcome out;
  auto start = Clock::now();
  const auto [itl_test, itl_train] = run_itl(data, cfg, margin);
  out.baseline = {"itl", key.n, key.T, key.trial, itl_test, itl_train, std::nullopt,
                  cfg.record_timing ? seconds_since(start) : 0.0};

  start = Clock::now();
  Rng init_rng(derive_seed(cell_seed, {kStreamInit}));
  const MtlModel model = train_mtl(data.train, cfg.k_model, margin, cfg.optimizer, init_rng);
  double mtl_test = 0.0;
  for (Index t = 0; t < key.T; ++t)
    mtl_test += test_error(data.normals[static_cast<std::size_t>(t)], model.task_vector(t),
                           data.test[static_cast<std::size_t>(t)]);
  mtl_test /= static_cast<double>(key.T);
  const double similarity = dictionary_similarity(model.dictionary, env.dictionary).value;
  out.method = {"mtl", key.n, key.T, key.trial, mtl_test, model.training_error, similarity,
                cfg.record_timing ? seconds_since(start) : 0.0};
  return out;
}

CellOutcome ltl_cell(const SweepConfig& cfg, const CellKey& key) {
  const std::uint64_t cell_seed =
      derive_seed(cfg.master_seed, {kTagLtlSweep, static_cast<std::uint64_t>(key.n),
                                    static_cast<std::uint64_t>(key.T),
                                    static_cast<std::uint64_t>(key.trial)});
  const Environment env = cell_environment(cfg, key.T, cell_seed);
  std::vector<Vector> normals;
  for (Index t = 0; t < key.T; ++t) normals.push_back(env.task_vector(t));
  const double margin = cfg.margin(key.n);

  CellOutcome out;
  auto start = Clock::now();
  std::vector<TaskDataset> train;
  for (Index t = 0; t < key.T; ++t) {
    Rng rng(derive_seed(cell_seed, {kStreamTrain, static_cast<std::uint64_t>(t)}));
    train.push_back(sample_labelled(normals[static_cast<std::size_t>(t)], key.n,
                                    cfg.input_radius_or_default(), cfg.noise_std, rng));
  }
  Rng init_rng(derive_seed(cell_seed, {kStreamInit}));
  const MtlModel model = train_mtl(train, cfg.k_model, margin, cfg.optimizer, init_rng);

  Rng new_rng(derive_seed(cell_seed, {kStreamNewTasks}));
  const std::vector<Vector> fresh = sample_new_tasks(env, cfg.new_task_count, new_rng);
  const TaskData data = sample_tasks(fresh, cfg, key.n, cell_seed, kStreamNewTrain, kStreamNewTest);

  double ltl_test = 0.0, ltl_train = 0.0;
  for (std::size_t j = 0; j < fresh.size(); ++j) {
    const LinearFit fit = adapt_new_task(model.dictionary, data.train[j], margin, cfg.optimizer);
    ltl_test += test_error(fresh[j], model.dictionary * fit.weights, data.test[j]);
    ltl_train += fit.training_error;
  }
  const auto count = static_cast<double>(fresh.size());
  const double similarity = dictionary_similarity(model.dictionary, env.dictionary).value;
  out.method = {"ltl", key.n, key.T, key.trial, ltl_test / count, ltl_train / count, similarity,
                cfg.record_timing ? seconds_since(start) : 0.0};

  start = Clock::now();
  const auto [itl_test, itl_train] = run_itl(data, cfg, margin);
  out.baseline = {"itl", key.n, key.T, key.trial, itl_test, itl_train, std::nullopt,
                  cfg.record_timing ? seconds_since(start) : 0.0};
  return out;
}

SweepResult run_sweep(const SweepConfig& cfg, const std::string& kind,
                      CellOutcome (*cell_fn)(const SweepConfig&, const CellKey&)) {
  cfg.validate();
  std::vector<CellKey> keys;
  for (Index n : cfg.n_grid)
    for (Index T : cfg.T_grid)
      for (Index trial = 0; trial < cfg.trials; ++trial) keys.push_back({n, T, trial});

  std::vector<CellOutcome> outcomes(keys.size());
  parallel_for(static_cast<Index>(keys.size()), cfg.workers, [&](Index i) {
    auto& slot = outcomes[static_cast<std::size_t>(i)];
    try {
      slot = cell_fn(cfg, keys[static_cast<std::size_t>(i)]);
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  });

  SweepResult result;
  result.kind = kind;
  std::size_t i = 0;
  for (Index n : cfg.n_grid)
    for (Index T : cfg.T_grid) {
      std::vector<double> base, method, diff, train, sim;
      for (Index trial = 0; trial < cfg.trials; ++trial, ++i) {
        const CellOutcome& o = outcomes[i];
        if (!o.error.empty()) {
          result.failures.push_back(kind + " n=" + std::to_string(n) + " T=" + std::to_string(T) +
                                    " trial=" + std::to_string(trial) + ": " + o.error);
          continue;
        }
        result.rows.push_back(o.baseline);
        result.rows.push_back(o.method);
        base.push_back(o.baseline.test_error);
        method.push_back(o.method.test_error);
        diff.push_back(o.baseline.test_error - o.method.test_error);
        train.push_back(o.method.training_error);
        if (o.method.similarity) sim.push_back(*o.method.similarity);
      }
      CellSummary cell;
      cell.n = n;
      cell.T = T;
      cell.trials = static_cast<Index>(base.size());
      cell.baseline = mean_se(base);
      cell.method = mean_se(method);
      cell.difference = mean_se(diff);
      cell.training_error = mean_se(train);
      if (!sim.empty()) cell.similarity = mean_se(sim);
      result.cells.push_back(cell);
    }
  return result;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

nlohmann::json mean_se_json(const MeanSe& m) { return {{"mean", m.mean}, {"se", m.se}}; }

nlohmann::json config_json(const SweepConfig& cfg) {
  nlohmann::json out = nlohmann::json::object();
  const std::string text = dump_config(cfg);
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    const std::string line = text.substr(start, end - start);
    const auto eq = line.find('=');
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
    start = end == std::string::npos ? text.size() : end + 1;
  }
  return out;
}

}  // namespace

const CellSummary& SweepResult::cell(Index n, Index T) const {
  for (const auto& c : cells)
    if (c.n == n && c.T == T) return c;
  throw InvalidParameter("no cell (n=" + std::to_string(n) + ", T=" + std::to_string(T) + ")");
}

SweepResult run_mtl_sweep(const SweepConfig& config) { return run_sweep(config, "mtl", mtl_cell); }

SweepResult run_ltl_sweep(const SweepConfig& config) { return run_sweep(config, "ltl", ltl_cell); }

void write_rows_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
  os << "method,n,T,trial,test_error,training_error,similarity,seconds\n";
  for (const auto& r : rows)
    os << r.method << ',' << r.n << ',' << r.T << ',' << r.trial << ',' << fmt(r.test_error) << ','
       << fmt(r.training_error) << ',' << (r.similarity ? fmt(*r.similarity) : std::string()) << ','
       << fmt(r.seconds) << '\n';
}

nlohmann::json sweep_summary_json(const SweepResult& result, const SweepConfig& config) {
  const std::string method = result.kind;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : result.cells) {
    nlohmann::json cell = {{"n", c.n},
                           {"T", c.T},
                           {"trials", c.trials},
                           {"itl_test_error", mean_se_json(c.baseline)},
                           {method + "_test_error", mean_se_json(c.method)},
                           {"difference_itl_minus_" + method, mean_se_json(c.difference)},
                           {method + "_training_error", mean_se_json(c.training_error)}};
    if (c.similarity) cell["similarity"] = mean_se_json(*c.similarity);
    cells.push_back(cell);
  }
  return {{"kind", result.kind},
          {"version", kVersion},
          {"seed", config.master_seed},
          {"config", config_json(config)},
          {"cells", cells},
          {"failures", result.failures}};
}

PhaseDiagram run_phase_diagram(const SweepConfig& config) {
  config.validate();
  const auto n_grid = log_grid(config.phase_n_min, config.phase_n_max,
                               static_cast<std::size_t>(config.phase_n_points));
  const auto t_grid = log_grid(config.phase_t_min, config.phase_t_max,
                               static_cast<std::size_t>(config.phase_t_points));
  return phase_diagram(n_grid, t_grid, config.phase_k, config.phase_d, config.phase_delta,
                       {config.phase_split_delta, config.phase_exact_eps});
}

nlohmann::json phase_summary_json(const PhaseDiagram& diagram, const SweepConfig& config) {
  nlohmann::json boundary = nlohmann::json::array();
  const auto edge = diagram.boundary();
  for (std::size_t i = 0; i < edge.size(); ++i)
    boundary.push_back({{"n", diagram.n_grid[i]},
                        {"T_min", std::isnan(edge[i]) ? nlohmann::json(nullptr) : nlohmann::json(edge[i])}});
  return {{"kind", "phase-diagram"},
          {"version", kVersion},
          {"K", diagram.K},
          {"d", diagram.d},
          {"delta", diagram.delta},
          {"split_delta", diagram.options.split_delta},
          {"exact_eps", diagram.options.exact_eps},
          {"cells", diagram.cells.size()},
          {"positive_cells", diagram.positive_count()},
          {"boundary", boundary},
          {"normalization",
           "bounds use unit-sphere covariance (trace 1, spectral 1/d); experimental sweeps use "
           "inputs of radius sqrt(d), which rescales scores but not the 0-1 error"},
          {"config", config_json(config)}};
}

bool ComplexityReport::all_pass() const {
  for (const auto& i : instances)
    if (!i.pass()) return false;
  return true;
}

ComplexityReport verify_complexity(const SweepConfig& config) {
  config.validate();
  ComplexityReport report;
  for (Index idx = 0; idx < config.verify_instances; ++idx) {
    const std::uint64_t seed =
        derive_seed(config.master_seed, {kTagVerify, static_cast<std::uint64_t>(idx)});
    Rng rng(seed);
    ComplexityInstance inst;
    inst.index = idx;
    inst.d = std::uniform_int_distribution<Index>(1, 20)(rng);
    inst.K = std::uniform_int_distribution<Index>(1, 3)(rng);
    inst.n = std::uniform_int_distribution<Index>(1, 8)(rng);
    inst.T = std::uniform_int_distribution<Index>(1, 8)(rng);
    const Index m = inst.n * inst.T;

    // Anisotropic cloud: Gaussian points with per-coordinate scales.
    Matrix points = standard_normal(m, inst.d, rng);
    std::uniform_real_distribution<double> scale(0.1, 3.0);
    for (Index j = 0; j < inst.d; ++j) points.col(j) *= scale(rng);

    const McEstimate mc =
        gaussian_average_linear(points, inst.K, config.verify_mc_samples, derive_seed(seed, {1}));
    inst.estimate = mc.mean;
    inst.std_error = mc.std_error;
    inst.bound = gaussian_average_bound(points, inst.K);
    inst.margin = inst.bound + 3.0 * mc.std_error - mc.mean;
    inst.gaussian_pass = inst.margin >= 0.0;

    // Random feasible dictionaries (sum_k ||d_k||^2 = K) never beat the closed form.
    Rng search_rng(derive_seed(seed, {2}));
    inst.search_gap = -std::numeric_limits<double>::infinity();
    inst.sup_norm = sup_representation_norm(points, inst.K);
    const double sv = Eigen::JacobiSVD<Matrix>(points).singularValues()(0);
    inst.eigen_oracle = std::sqrt(static_cast<double>(inst.K) * sv * sv);
    inst.sup_norm_search_max = 0.0;
    for (Index draw = 0; draw < config.verify_search_draws; ++draw) {
      const Matrix gamma = standard_normal(inst.K, m, search_rng);
      const double closed = dictionary_class_supremum(gamma, points);
      const Matrix v = gamma * points;  // K x d, row k pairs with atom k
      for (Index s = 0; s < config.verify_search_dicts; ++s) {
        Matrix dict = standard_normal(inst.d, inst.K, search_rng);
        dict *= std::sqrt(static_cast<double>(inst.K)) / dict.norm();
        const double value = (v * dict).trace();
        inst.search_gap = std::max(inst.search_gap, value - closed);
        inst.sup_norm_search_max = std::max(inst.sup_norm_search_max, (points * dict).norm());
      }
    }
    inst.search_pass = inst.search_gap <= 1e-9;
    inst.sup_pass = std::abs(inst.sup_norm - inst.eigen_oracle) <= 1e-8 &&
                    inst.sup_norm_search_max <= inst.sup_norm + 1e-9;
    report.instances.push_back(inst);
  }
  return report;
}

void write_complexity_csv(const ComplexityReport& report, std::ostream& os) {
  os << "instance,d,K,n,T,estimate,std_error,bound,margin,gaussian_pass,search_gap,search_pass,"
        "sup_norm,eigen_oracle,sup_norm_search_max,sup_pass\n";
  for (const auto& i : report.instances)
    os << i.index << ',' << i.d << ',' << i.K << ',' << i.n << ',' << i.T << ',' << fmt(i.estimate)
       << ',' << fmt(i.std_error) << ',' << fmt(i.bound) << ',' << fmt(i.margin) << ','
       << i.gaussian_pass << ',' << fmt(i.search_gap) << ',' << i.search_pass << ','
       << fmt(i.sup_norm) << ',' << fmt(i.eigen_oracle) << ',' << fmt(i.sup_norm_search_max) << ','
       << i.sup_pass << '\n';
}

nlohmann::json complexity_summary_json(const ComplexityReport& report, const SweepConfig& config) {
  std::size_t passed = 0;
  for (const auto& i : report.instances)
    if (i.pass()) ++passed;
  return {{"kind", "verify-bounds"},
          {"version", kVersion},
          {"seed", config.master_seed},
          {"instances", report.instances.size()},
          {"passed", passed},
          {"all_pass", report.all_pass()},
          {"config", config_json(config)}};
}

LowerBoundReport simulate_lower_bound(const SweepConfig& config) {
  config.validate();
  LowerBoundReport report;
  report.d = config.sim_d;
  report.n = config.sim_n;
  report.trials = config.sim_trials;
  report.delta = config.sim_delta;
  const BoundValue lower = equivariant_lower(static_cast<double>(config.sim_n),
                                             static_cast<double>(config.sim_d), config.sim_delta);
  report.lower = lower.value;
  report.vacuous = lower.vacuous;
  report.errors.assign(static_cast<std::size_t>(config.sim_trials), 0.0);

  parallel_for(config.sim_trials, config.workers, [&](Index trial) {
    Rng rng(derive_seed(config.master_seed,
                        {kTagLowerBound, static_cast<std::uint64_t>(config.sim_d),
                         static_cast<std::uint64_t>(config.sim_n), static_cast<std::uint64_t>(trial)}));
    const Vector u = sample_sphere(config.sim_d, 1.0, rng);
    const TaskDataset ds = sample_labelled(u, config.sim_n, config.sim_input_radius, 0.0, rng);
    const LinearFit fit = train_itl(ds, 1.0, config.sim_margin, config.optimizer);
    const double norm = fit.weights.norm();
    // A zero hypothesis predicts +1 everywhere: error 1/2.
    report.errors[static_cast<std::size_t>(trial)] =
        norm > 0 ? analytic_err(u, fit.weights / norm) : 0.5;
  });

  for (double e : report.errors) {
    report.mean_err += e;
    if (!report.vacuous && e < report.lower) ++report.violations;
  }
  const auto trials = static_cast<double>(config.sim_trials);
  report.mean_err /= trials;
  report.violation_fraction = static_cast<double>(report.violations) / trials;
  report.allowed_fraction =
      config.sim_delta + 3.0 * std::sqrt(config.sim_delta * (1.0 - config.sim_delta) / trials);
  return report;
}

nlohmann::json lower_bound_json(const LowerBoundReport& report, const SweepConfig& config) {
  return {{"kind", "lower-bound-sim"},
          {"version", kVersion},
          {"seed", config.master_seed},
          {"d", report.d},
          {"n", report.n},
          {"delta", report.delta},
          {"trials", report.trials},
          {"lower_bound", report.lower},
          {"vacuous", report.vacuous},
          {"violations", report.violations},
          {"violation_fraction", report.violation_fraction},
          {"allowed_fraction", report.allowed_fraction},
          {"mean_err", report.mean_err},
          {"pass", report.pass()},
          {"config", config_json(config)}};
}

}  // namespace mtrl
