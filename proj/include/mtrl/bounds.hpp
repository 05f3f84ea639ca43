#pragma once

// Closed-form excess-risk bounds for subspace multitask and learning-to-learn,
// the equivariant ITL lower bound, and the (n, T) phase diagram built from them.

#include <iosfwd>
#include <span>
#include <vector>

namespace mtrl {

struct BoundInputs {
  double d = 1, K = 1, n = 1, T = 1;
  double delta = 0.05;
  double B = 1.0;       // predictor norm radius
  double L_phi = 1.0;   // activation Lipschitz constant
  double c1 = 1.0;      // unspecified universal constants, reported with results
  double c2 = 1.0;
  double cov_trace = 1.0;
  double cov_spectral = 1.0;
  double epsilon = 0.0;  // half-space slack, informational

  void validate() const;

  /// Covariance of the uniform distribution on the unit sphere of R^d.
  static BoundInputs unit_sphere(double d, double K, double n, double T, double delta);
};

/// A bound value; `vacuous` marks values floored at 0 or exceeding 1.
struct BoundValue {
  double value = 0.0;
  bool vacuous = false;
};

BoundValue mtl_bound(const BoundInputs& in);
BoundValue mtl_tracenorm_bound(const BoundInputs& in);

enum class LtlVariant { Distribution, Empirical };

/// The empirical variant needs one sup-norm sqrt(K n ||C(X_t)||_inf) per task.
BoundValue ltl_bound(const BoundInputs& in, LtlVariant variant = LtlVariant::Distribution,
                     std::span<const double> per_task_sup_norms = {});

/// eps minimizing eps + ltl_bound(B = sqrt(d)/(2 eps)) on the unit sphere.
double optimal_epsilon(double n, double T, double K, double d);

/// Half-space LTL bound optimized over eps. The default is the conventional
/// closed form; `exact_eps` returns the true minimum over eps instead.
BoundValue halfspace_ltl_upper(double n, double T, double K, double d, double delta,
                               bool exact_eps = false);

/// Lower bound on the error of any orthogonally equivariant single-task
/// learner, floored at 0. n >= d is vacuous.
BoundValue equivariant_lower(double n, double d, double delta);

struct PhaseOptions {
  bool split_delta = false;  // use delta/2 in each bound (union bound)
  bool exact_eps = false;
};

struct PhaseCell {
  double n = 0, T = 0;
  double lower = 0, upper = 0, advantage = 0;
  bool vacuous = false;
};

struct PhaseDiagram {
  std::vector<double> n_grid, T_grid;
  std::vector<PhaseCell> cells;  // n-major: cells[i * T_grid.size() + j]
  double K = 0, d = 0, delta = 0;
  PhaseOptions options;

  const PhaseCell& at(std::size_t n_index, std::size_t t_index) const;
  std::size_t positive_count() const;
  /// Per n, the smallest grid T with advantage >= 0 (NaN when none): the
  /// zero-level boundary of the advantage surface.
  std::vector<double> boundary() const;
};

PhaseDiagram phase_diagram(std::span<const double> n_grid, std::span<const double> T_grid,
                           double K, double d, double delta, PhaseOptions options = {});

/// count points log-spaced over [lo, hi], inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// CSV with header n,T,lower,upper,advantage,vacuous_flag.
void write_phase_csv(const PhaseDiagram& diagram, std::ostream& os);

}  // namespace mtrl
