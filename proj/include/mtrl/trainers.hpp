#pragma once

// Projected subgradient trainers for independent task learning, the joint
// dictionary + predictors problem, and adaptation of a frozen dictionary.

#include <span>
#include <vector>

#include "mtrl/hypothesis.hpp"
#include "mtrl/rng.hpp"
#include "mtrl/synthgen.hpp"

namespace mtrl {

struct OptimizerParams {
  int max_iters = 2000;  // 0 is allowed and returns the initial iterate
  double step0 = 1.0;    // step_i = step0 / sqrt(i + 1)
  int restarts = 3;
  double tolerance = 1e-6;  // minimum best-objective improvement ...
  int window = 100;         // ... over this many iterations, else stop

  void validate() const;
  double step(int iteration) const;
};

struct LinearFit {
  Vector weights;
  double objective = 0.0;       // mean training hinge at `weights`
  double training_error = 0.0;  // 0-1 error on the training sample
  int iterations = 0;
};

struct MtlModel {
  Dictionary dictionary;            // d x K, ||D||_F <= 1
  std::vector<Vector> task_weights;  // T vectors, each ||c_t|| <= 1
  double margin = 1.0;
  double objective = 0.0;
  double training_error = 0.0;  // task-averaged 0-1 training error
  int iterations = 0;

  Index task_count() const { return static_cast<Index>(task_weights.size()); }
  /// Effective normal D c_t of task t.
  Vector task_vector(Index t) const;
};

/// Margin c = 2/eps with eps = sqrt(k_model / n).
double margin_for(Index k_model, Index n);

/// Mean of max{0, 1 - y <w, x> / c} over the sample.
double hinge_objective(const Matrix& features, const Vector& labels, const Vector& weights,
                       double margin);

/// Fraction of points with sign(<w, x>) != y, using sign(0) = +1.
double zero_one_error(const Matrix& features, const Vector& labels, const Vector& weights);

/// Joint objective (1/nT) sum_{t,i} hinge(y_ti <c_t, D^T x_ti>) of a model.
double mtl_objective(const Dictionary& dictionary, std::span<const Vector> task_weights,
                     std::span<const TaskDataset> datasets, double margin);

/// Constrained hinge minimization in input space, ||w|| <= radius, started at
/// w = 0. Returns the best iterate seen.
LinearFit train_itl(const TaskDataset& dataset, double radius, double margin,
                    const OptimizerParams& params = {});

/// Alternating projected subgradient on the joint problem with ||D||_F <= 1
/// and ||c_t|| <= 1. Each restart draws a Gaussian D from `rng`.
MtlModel train_mtl(std::span<const TaskDataset> datasets, Index k_model, double margin,
                   const OptimizerParams& params, Rng& rng);

/// Fits c with ||c|| <= 1 on features D^T x with the dictionary frozen.
LinearFit adapt_new_task(const Dictionary& dictionary, const TaskDataset& dataset, double margin,
                         const OptimizerParams& params = {});

}  // namespace mtrl
