#include "mtrl/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "mtrl/error.hpp"

namespace mtrl {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;  // sqrt(2 pi)

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidParameter("delta must lie in (0, 1)");
}

void check_count(double v, const char* name) {
  if (!(v >= 1.0) || !std::isfinite(v))
    throw InvalidParameter(std::string(name) + " must be a finite count >= 1");
}

BoundValue upper(double v) { return {v, v > 1.0}; }

// K sqrt(d/T) + sqrt(K/n): the eps-independent factor of the half-space bound.
double halfspace_rate(double n, double T, double K, double d) {
  return K * std::sqrt(d / T) + std::sqrt(K / n);
}

}  // namespace

void BoundInputs::validate() const {
  check_count(d, "d");
  check_count(K, "K");
  check_count(n, "n");
  check_count(T, "T");
  check_delta(delta);
  if (!(B > 0) || !(L_phi > 0)) throw InvalidParameter("B and L_phi must be positive");
  if (!(c1 >= 0) || !(c2 >= 0)) throw InvalidParameter("c1 and c2 must be nonnegative");
  if (!(cov_spectral > 0) || !(cov_trace >= cov_spectral))
    throw InvalidParameter("covariance norms must satisfy trace >= spectral > 0");
}

BoundInputs BoundInputs::unit_sphere(double d, double K, double n, double T, double delta) {
  BoundInputs in;
  in.d = d;
  in.K = K;
  in.n = n;
  in.T = T;
  in.delta = delta;
  in.cov_trace = 1.0;
  in.cov_spectral = 1.0 / d;
  return in;
}

BoundValue mtl_bound(const BoundInputs& in) {
  in.validate();
  const double nT = in.n * in.T;
  const double v = in.c1 * in.L_phi * in.B * in.K * std::sqrt(in.cov_trace / nT) +
                   in.c2 * in.L_phi * in.B * std::sqrt(in.K * in.cov_spectral / in.n) +
                   std::sqrt(8.0 * std::log(2.0 / in.delta) / nT);
  return upper(v);
}

BoundValue mtl_tracenorm_bound(const BoundInputs& in) {
  in.validate();
  const double nT = in.n * in.T;
  const double v = 2.0 * in.B * std::sqrt(in.K * in.cov_trace * std::log(nT) / nT) +
                   in.B * std::sqrt(8.0 * in.K * in.cov_spectral / in.n) +
                   std::sqrt(8.0 * std::log(2.0 / in.delta) / nT);
  return upper(v);
}

BoundValue ltl_bound(const BoundInputs& in, LtlVariant variant,
                     std::span<const double> per_task_sup_norms) {
  in.validate();
  const double representation = kSqrt2Pi * in.L_phi * in.B * in.K * std::sqrt(in.cov_trace) /
                                std::sqrt(in.T);
  if (variant == LtlVariant::Distribution) {
    if (!per_task_sup_norms.empty())
      throw InvalidParameter("ltl_bound: per-task norms are only used by the empirical variant");
    const double v = representation +
                     kSqrt2Pi * in.L_phi * in.B * std::sqrt(in.K * in.cov_spectral / in.n) +
                     std::sqrt(8.0 * std::log(4.0 / in.delta) / in.T);
    return upper(v);
  }
  if (per_task_sup_norms.empty())
    throw InvalidParameter("ltl_bound: empirical variant needs per-task sup norms");
  double mean_norm = 0.0;
  for (double s : per_task_sup_norms) mean_norm += s;
  mean_norm /= static_cast<double>(per_task_sup_norms.size());
  const double v = representation + kSqrt2Pi * in.B * mean_norm / in.n +
                   5.0 * std::sqrt(std::log(8.0 / in.delta) / in.T);
  return upper(v);
}

double optimal_epsilon(double n, double T, double K, double d) {
  return std::sqrt(kSqrt2Pi / 2.0 * halfspace_rate(n, T, K, d));
}

BoundValue halfspace_ltl_upper(double n, double T, double K, double d, double delta,
                               bool exact_eps) {
  check_count(n, "n");
  check_count(T, "T");
  check_count(K, "K");
  check_count(d, "d");
  check_delta(delta);
  const double scale = exact_eps ? 2.0 * kSqrt2Pi : kSqrt2Pi;
  const double v = std::sqrt(scale * halfspace_rate(n, T, K, d)) +
                   std::sqrt(8.0 * std::log(4.0 / delta) / T);
  return upper(v);
}

BoundValue equivariant_lower(double n, double d, double delta) {
  check_count(n, "n");
  check_count(d, "d");
  check_delta(delta);
  if (n >= d) return {0.0, true};
  const double v = (std::sqrt((d - n) / d) - std::sqrt(std::log(1.0 / delta) / d)) /
                   std::numbers::pi;
  if (v <= 0.0) return {0.0, true};
  return {v, false};
}

const PhaseCell& PhaseDiagram::at(std::size_t n_index, std::size_t t_index) const {
  return cells.at(n_index * T_grid.size() + t_index);
}

std::size_t PhaseDiagram::positive_count() const {
  std::size_t count = 0;
  for (const auto& c : cells)
    if (c.advantage > 0) ++count;
  return count;
}

std::vector<double> PhaseDiagram::boundary() const {
  std::vector<double> out(n_grid.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n_grid.size(); ++i)
    for (std::size_t j = 0; j < T_grid.size(); ++j)
      if (at(i, j).advantage >= 0) {
        out[i] = T_grid[j];
        break;
      }
  return out;
}

PhaseDiagram phase_diagram(std::span<const double> n_grid, std::span<const double> T_grid,
                           double K, double d, double delta, PhaseOptions options) {
  if (n_grid.empty() || T_grid.empty()) throw InvalidParameter("phase_diagram: empty grid");
  check_delta(delta);
  PhaseDiagram out;
  out.n_grid.assign(n_grid.begin(), n_grid.end());
  out.T_grid.assign(T_grid.begin(), T_grid.end());
  out.K = K;
  out.d = d;
  out.delta = delta;
  out.options = options;
  const double each = options.split_delta ? delta / 2.0 : delta;
  out.cells.reserve(n_grid.size() * T_grid.size());
  for (double n : n_grid) {
    const BoundValue lower = equivariant_lower(n, d, each);
    for (double T : T_grid) {
      const BoundValue up = halfspace_ltl_upper(n, T, K, d, each, options.exact_eps);
      PhaseCell cell;
      cell.n = n;
      cell.T = T;
      cell.lower = lower.value;
      cell.upper = up.value;
      cell.advantage = lower.value - up.value;
      cell.vacuous = lower.vacuous || up.vacuous;
      out.cells.push_back(cell);
    }
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0) || !(hi >= lo) || count == 0) throw InvalidParameter("log_grid: bad range");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

void write_phase_csv(const PhaseDiagram& diagram, std::ostream& os) {
  os << "n,T,lower,upper,advantage,vacuous_flag\n";
  char line[256];
  for (const auto& c : diagram.cells) {
    std::snprintf(line, sizeof line, "%.10g,%.10g,%.12g,%.12g,%.12g,%d\n", c.n, c.T, c.lower,
                  c.upper, c.advantage, c.vacuous ? 1 : 0);
    os << line;
  }
}

}  // namespace mtrl
