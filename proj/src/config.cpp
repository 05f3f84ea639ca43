#include "mtrl/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mtrl/error.hpp"

namespace mtrl {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw InvalidParameter("config: bad value '" + std::string(value) + "' for key '" +
                         std::string(key) + "'");
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view value) {
  value = trim(value);
  Int out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  const std::string s(trim(value));
  try {
    std::size_t used = 0;
    const double out = std::stod(s, &used);
    if (used != s.size()) bad_value(key, value);
    return out;
  } catch (const std::logic_error&) {
    bad_value(key, value);
  }
}

bool parse_bool(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  bad_value(key, value);
}

std::vector<Index> parse_grid(std::string_view key, std::string_view value) {
  value = trim(value);
  std::vector<Index> out;
  if (value.find(':') != std::string_view::npos) {
    std::vector<Index> parts;
    std::size_t start = 0;
    while (start <= value.size()) {
      const auto end = value.find(':', start);
      parts.push_back(parse_int<Index>(key, value.substr(start, end - start)));
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
    if (parts.size() != 3 || parts[2] <= 0 || parts[1] < parts[0]) bad_value(key, value);
    for (Index v = parts[0]; v <= parts[1]; v += parts[2]) out.push_back(v);
  } else {
    std::size_t start = 0;
    while (start <= value.size()) {
      const auto end = value.find(',', start);
      out.push_back(parse_int<Index>(key, value.substr(start, end - start)));
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
  }
  return out;
}

std::string grid_text(const std::vector<Index>& grid) {
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(grid[i]);
  }
  return out;
}

std::string num_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  std::function<void(SweepConfig&, std::string_view)> set;
  std::function<std::string(const SweepConfig&)> get;
};

#define MTRL_INDEX(name)                                                                  \
  {#name, Field{[](SweepConfig& c, std::string_view v) { c.name = parse_int<Index>(#name, v); }, \
                [](const SweepConfig& c) { return std::to_string(c.name); }}}
#define MTRL_DOUBLE(name)                                                                  \
  {#name, Field{[](SweepConfig& c, std::string_view v) { c.name = parse_double(#name, v); }, \
                [](const SweepConfig& c) { return num_text(c.name); }}}
#define MTRL_BOOL(name)                                                                  \
  {#name, Field{[](SweepConfig& c, std::string_view v) { c.name = parse_bool(#name, v); }, \
                [](const SweepConfig& c) { return std::string(c.name ? "true" : "false"); }}}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      MTRL_INDEX(d),
      MTRL_INDEX(k_true),
      MTRL_INDEX(k_model),
      {"n_grid", Field{[](SweepConfig& c, std::string_view v) { c.n_grid = parse_grid("n_grid", v); },
                       [](const SweepConfig& c) { return grid_text(c.n_grid); }}},
      {"T_grid", Field{[](SweepConfig& c, std::string_view v) { c.T_grid = parse_grid("T_grid", v); },
                       [](const SweepConfig& c) { return grid_text(c.T_grid); }}},
      MTRL_INDEX(trials),
      MTRL_DOUBLE(noise_std),
      {"input_radius",
       Field{[](SweepConfig& c, std::string_view v) {
               if (trim(v) == "default" || trim(v).empty())
                 c.input_radius.reset();
               else
                 c.input_radius = parse_double("input_radius", v);
             },
             [](const SweepConfig& c) {
               return c.input_radius ? num_text(*c.input_radius) : std::string("default");
             }}},
      MTRL_INDEX(test_size),
      MTRL_INDEX(new_task_count),
      {"master_seed",
       Field{[](SweepConfig& c, std::string_view v) {
               c.master_seed = parse_int<std::uint64_t>("master_seed", v);
             },
             [](const SweepConfig& c) { return std::to_string(c.master_seed); }}},
      {"max_iters", Field{[](SweepConfig& c, std::string_view v) {
                            c.optimizer.max_iters = parse_int<int>("max_iters", v);
                          },
                          [](const SweepConfig& c) { return std::to_string(c.optimizer.max_iters); }}},
      {"step0", Field{[](SweepConfig& c, std::string_view v) {
                        c.optimizer.step0 = parse_double("step0", v);
                      },
                      [](const SweepConfig& c) { return num_text(c.optimizer.step0); }}},
      {"restarts", Field{[](SweepConfig& c, std::string_view v) {
                           c.optimizer.restarts = parse_int<int>("restarts", v);
                         },
                         [](const SweepConfig& c) { return std::to_string(c.optimizer.restarts); }}},
      {"tolerance", Field{[](SweepConfig& c, std::string_view v) {
                            c.optimizer.tolerance = parse_double("tolerance", v);
                          },
                          [](const SweepConfig& c) { return num_text(c.optimizer.tolerance); }}},
      {"window", Field{[](SweepConfig& c, std::string_view v) {
                         c.optimizer.window = parse_int<int>("window", v);
                       },
                       [](const SweepConfig& c) { return std::to_string(c.optimizer.window); }}},
      {"margin_policy",
       Field{[](SweepConfig& c, std::string_view v) {
               v = trim(v);
               if (v == "two_eps")
                 c.margin_policy = MarginPolicy::TwoEps;
               else if (v == "two_over_eps")
                 c.margin_policy = MarginPolicy::TwoOverEps;
               else
                 bad_value("margin_policy", v);
             },
             [](const SweepConfig& c) {
               return std::string(c.margin_policy == MarginPolicy::TwoEps ? "two_eps"
                                                                          : "two_over_eps");
             }}},
      MTRL_DOUBLE(itl_radius),
      {"out_dir", Field{[](SweepConfig& c, std::string_view v) { c.out_dir = std::string(trim(v)); },
                        [](const SweepConfig& c) { return c.out_dir; }}},
      MTRL_INDEX(workers),
      MTRL_BOOL(record_timing),
      MTRL_DOUBLE(phase_d),
      MTRL_DOUBLE(phase_k),
      MTRL_DOUBLE(phase_delta),
      MTRL_DOUBLE(phase_n_min),
      MTRL_DOUBLE(phase_n_max),
      MTRL_DOUBLE(phase_t_min),
      MTRL_DOUBLE(phase_t_max),
      MTRL_INDEX(phase_n_points),
      MTRL_INDEX(phase_t_points),
      MTRL_BOOL(phase_split_delta),
      MTRL_BOOL(phase_exact_eps),
      MTRL_INDEX(verify_instances),
      MTRL_INDEX(verify_mc_samples),
      MTRL_INDEX(verify_search_dicts),
      MTRL_INDEX(verify_search_draws),
      MTRL_INDEX(sim_d),
      MTRL_INDEX(sim_n),
      MTRL_DOUBLE(sim_delta),
      MTRL_INDEX(sim_trials),
      MTRL_DOUBLE(sim_margin),
      MTRL_DOUBLE(sim_input_radius),
  };
  return table;
}

#undef MTRL_INDEX
#undef MTRL_DOUBLE
#undef MTRL_BOOL

}  // namespace

SweepConfig::SweepConfig() {
  for (Index v = 5; v <= 150; v += 5) {
    n_grid.push_back(v);
    T_grid.push_back(v);
  }
}

void SweepConfig::validate() const {
  auto positive = [](const std::vector<Index>& g) {
    if (g.empty()) return false;
    for (Index v : g)
      if (v < 1) return false;
    return true;
  };
  require(d >= 1, "d must be >= 1");
  require(k_true >= 1 && k_true <= d, "k_true must lie in [1, d]");
  require(k_model >= 1 && k_model <= d, "k_model must lie in [1, d]");
  require(positive(n_grid), "n_grid must be nonempty and positive");
  require(positive(T_grid), "T_grid must be nonempty and positive");
  require(trials >= 1, "trials must be >= 1");
  require(noise_std >= 0, "noise_std must be >= 0");
  require(!input_radius || *input_radius > 0, "input_radius must be positive");
  require(test_size >= 1, "test_size must be >= 1");
  require(new_task_count >= 1, "new_task_count must be >= 1");
  require(itl_radius > 0, "itl_radius must be positive");
  require(workers >= 1, "workers must be >= 1");
  optimizer.validate();
  require(phase_d >= 1 && phase_k >= 1, "phase_d and phase_k must be >= 1");
  require(phase_delta > 0 && phase_delta < 1, "phase_delta must lie in (0, 1)");
  require(phase_n_min >= 1 && phase_n_max >= phase_n_min, "bad phase n range");
  require(phase_t_min >= 1 && phase_t_max >= phase_t_min, "bad phase T range");
  require(phase_n_points >= 1 && phase_t_points >= 1, "phase grids need >= 1 point");
  require(verify_instances >= 0 && verify_mc_samples >= 2, "bad verification sizes");
  require(verify_search_dicts >= 1 && verify_search_draws >= 1, "bad random-search sizes");
  require(sim_d >= 1 && sim_n >= 1 && sim_trials >= 1, "bad simulation sizes");
  require(sim_delta > 0 && sim_delta < 1, "sim_delta must lie in (0, 1)");
  require(sim_margin > 0 && sim_input_radius > 0, "sim_margin and sim_input_radius must be positive");
}

double SweepConfig::input_radius_or_default() const {
  return input_radius.value_or(std::sqrt(static_cast<double>(d)));
}

double SweepConfig::margin(Index n) const {
  const double two_over_eps = margin_for(k_model, n);
  return margin_policy == MarginPolicy::TwoOverEps ? two_over_eps : 4.0 / two_over_eps;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [name, field] : fields()) out.push_back(name);
    return out;
  }();
  return keys;
}

void apply_setting(SweepConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  for (const auto& [name, field] : fields())
    if (name == key) {
      field.set(config, value);
      return;
    }
  throw InvalidParameter("config: unknown key '" + std::string(key) + "'");
}

void load_config_file(SweepConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: cannot open " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw InvalidParameter("config: line " + std::to_string(lineno) + " is not key=value");
    apply_setting(config, view.substr(0, eq), view.substr(eq + 1));
  }
}

std::string dump_config(const SweepConfig& config) {
  std::ostringstream os;
  for (const auto& [name, field] : fields()) os << name << '=' << field.get(config) << '\n';
  return os.str();
}

}  // namespace mtrl
