#include "mtrl/trainers.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mtrl {

void OptimizerParams::validate() const {
  if (max_iters < 0) throw InvalidParameter("optimizer: max_iters must be >= 0");
  if (!(step0 > 0)) throw InvalidParameter("optimizer: step0 must be positive");
  if (restarts < 1) throw InvalidParameter("optimizer: restarts must be >= 1");
  if (!(tolerance >= 0)) throw InvalidParameter("optimizer: tolerance must be >= 0");
  if (window < 1) throw InvalidParameter("optimizer: window must be >= 1");
}

double OptimizerParams::step(int iteration) const {
  return step0 / std::sqrt(static_cast<double>(iteration) + 1.0);
}

Vector MtlModel::task_vector(Index t) const {
  return dictionary * task_weights.at(static_cast<std::size_t>(t));
}

double margin_for(Index k_model, Index n) {
  if (k_model < 1 || n < 1) throw InvalidParameter("margin_for: counts must be >= 1");
  const double eps = std::sqrt(static_cast<double>(k_model) / static_cast<double>(n));
  return 2.0 / eps;
}

namespace {

// Sum of hinge values over the sample and the vector y .* 1{y s < c}, which
// carries the data-dependent part of the subgradient: grad = -F^T active / (n c).
double hinge_sum(const Vector& scores, const Vector& labels, double margin, Vector* active) {
  double total = 0.0;
  if (active) active->resize(scores.size());
  for (Index i = 0; i < scores.size(); ++i) {
    const double z = labels(i) * scores(i);
    const auto h = training_hinge(z, margin);
    total += h.value;
    if (active) (*active)(i) = h.slope != 0.0 ? labels(i) : 0.0;
  }
  return total;
}

// Tracks the best objective and decides the windowed early stop.
class BestTracker {
 public:
  explicit BestTracker(const OptimizerParams& params) : params_(params) {}

  bool offer(double objective) {
    const bool improved = objective < best_;
    if (improved) best_ = objective;
    history_.push_back(best_);
    return improved;
  }

  bool stalled() const {
    const auto w = static_cast<std::size_t>(params_.window);
    if (history_.size() <= w) return false;
    return history_[history_.size() - 1 - w] - best_ < params_.tolerance;
  }

  double best() const { return best_; }

 private:
  const OptimizerParams& params_;
  double best_ = std::numeric_limits<double>::infinity();
  std::vector<double> history_;
};

LinearFit fit_linear(const Matrix& features, const Vector& labels, double radius, double margin,
                     const OptimizerParams& params) {
  params.validate();
  if (features.rows() == 0) throw InvalidInput("training set is empty");
  if (features.rows() != labels.size()) throw DimensionMismatch("features and labels disagree");
  if (!(radius > 0)) throw InvalidParameter("weight radius must be positive");
  if (!(margin > 0)) throw InvalidParameter("margin must be positive");

  const double n = static_cast<double>(features.rows());
  Vector w = Vector::Zero(features.cols());
  LinearFit fit;
  fit.weights = w;
  BestTracker tracker(params);
  Vector active;

  for (int i = 0;; ++i) {
    const Vector scores = features * w;
    const double objective = hinge_sum(scores, labels, margin, &active) / n;
    if (tracker.offer(objective)) fit.weights = w;
    fit.iterations = i;
    if (i == params.max_iters || tracker.stalled()) break;

    const Vector grad = features.transpose() * active * (-1.0 / (n * margin));
    if (grad.squaredNorm() == 0.0) break;
    w = project_l2_ball(w - params.step(i) * grad, radius);
  }
  fit.objective = tracker.best();
  fit.training_error = zero_one_error(features, labels, fit.weights);
  return fit;
}

}  // namespace

double hinge_objective(const Matrix& features, const Vector& labels, const Vector& weights,
                       double margin) {
  if (features.rows() == 0) throw InvalidInput("hinge_objective: empty sample");
  return hinge_sum(features * weights, labels, margin, nullptr) /
         static_cast<double>(features.rows());
}

double zero_one_error(const Matrix& features, const Vector& labels, const Vector& weights) {
  if (features.rows() == 0) throw InvalidInput("zero_one_error: empty sample");
  const Vector scores = features * weights;
  Index wrong = 0;
  for (Index i = 0; i < scores.size(); ++i)
    if (sign_label(scores(i)) != labels(i)) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(scores.size());
}

double mtl_objective(const Dictionary& dictionary, std::span<const Vector> task_weights,
                     std::span<const TaskDataset> datasets, double margin) {
  if (task_weights.size() != datasets.size())
    throw DimensionMismatch("mtl_objective: one weight vector per task required");
  double total = 0.0;
  Index count = 0;
  for (std::size_t t = 0; t < datasets.size(); ++t) {
    const Vector u = dictionary * task_weights[t];
    total += hinge_sum(datasets[t].inputs * u, datasets[t].labels, margin, nullptr);
    count += datasets[t].size();
  }
  if (count == 0) throw InvalidInput("mtl_objective: no data");
  return total / static_cast<double>(count);
}

LinearFit train_itl(const TaskDataset& dataset, double radius, double margin,
                    const OptimizerParams& params) {
  return fit_linear(dataset.inputs, dataset.labels, radius, margin, params);
}

LinearFit adapt_new_task(const Dictionary& dictionary, const TaskDataset& dataset, double margin,
                         const OptimizerParams& params) {
  if (dictionary.rows() != dataset.dim())
    throw DimensionMismatch("adapt_new_task: dictionary rows must equal input dimension");
  const Matrix features = dataset.inputs * dictionary;
  return fit_linear(features, dataset.labels, 1.0, margin, params);
}

MtlModel train_mtl(std::span<const TaskDataset> datasets, Index k_model, double margin,
                   const OptimizerParams& params, Rng& rng) {
  params.validate();
  if (datasets.empty()) throw InvalidInput("train_mtl: task list is empty");
  if (!(margin > 0)) throw InvalidParameter("train_mtl: margin must be positive");
  const Index d = datasets.front().dim();
  if (k_model < 1 || k_model > d)
    throw InvalidParameter("train_mtl: need 1 <= k_model <= d, got " + std::to_string(k_model));
  Index total = 0;
  for (const auto& ds : datasets) {
    if (ds.dim() != d) throw DimensionMismatch("train_mtl: tasks have different input dimension");
    if (ds.size() == 0) throw InvalidInput("train_mtl: a task has no data");
    total += ds.size();
  }

  const Index tasks = static_cast<Index>(datasets.size());
  const double inv_total = 1.0 / static_cast<double>(total);

  MtlModel best;
  best.margin = margin;
  best.objective = std::numeric_limits<double>::infinity();

  std::vector<Vector> active(static_cast<std::size_t>(tasks));
  std::vector<Vector> moments(static_cast<std::size_t>(tasks));

  // Fills moments[t] = X_t^T (y .* 1{active}) at (D, C) and returns the joint objective.
  auto evaluate = [&](const Dictionary& dict, const Matrix& coeffs) {
    double sum = 0.0;
    for (Index t = 0; t < tasks; ++t) {
      const auto& ds = datasets[static_cast<std::size_t>(t)];
      const Vector u = dict * coeffs.col(t);
      auto& a = active[static_cast<std::size_t>(t)];
      sum += hinge_sum(ds.inputs * u, ds.labels, margin, &a);
      moments[static_cast<std::size_t>(t)].noalias() = ds.inputs.transpose() * a;
    }
    return sum * inv_total;
  };

  for (int restart = 0; restart < params.restarts; ++restart) {
    Dictionary dict = project_frobenius_ball(standard_normal(d, k_model, rng), 1.0);
    Matrix coeffs = Matrix::Zero(k_model, tasks);
    BestTracker tracker(params);
    Dictionary run_dict = dict;
    Matrix run_coeffs = coeffs;
    int iterations = 0;

    for (int i = 0;; ++i) {
      const double objective = evaluate(dict, coeffs);
      if (tracker.offer(objective)) {
        run_dict = dict;
        run_coeffs = coeffs;
      }
      iterations = i;
      if (i == params.max_iters || tracker.stalled()) break;
      const double eta = params.step(i);

      // Predictor block. The joint objective separates over tasks given D;
      // each task takes a step on its own mean hinge.
      for (Index t = 0; t < tasks; ++t) {
        const auto& ds = datasets[static_cast<std::size_t>(t)];
        const Vector grad = dict.transpose() * moments[static_cast<std::size_t>(t)] *
                            (-1.0 / (static_cast<double>(ds.size()) * margin));
        coeffs.col(t) = project_l2_ball(Vector(coeffs.col(t) - eta * grad), 1.0);
      }

      // Dictionary block at the updated predictors.
      evaluate(dict, coeffs);
      Matrix grad = Matrix::Zero(d, k_model);
      for (Index t = 0; t < tasks; ++t)
        grad.noalias() += moments[static_cast<std::size_t>(t)] * coeffs.col(t).transpose();
      grad *= -inv_total / margin;
      dict = project_frobenius_ball(Dictionary(dict - eta * grad), 1.0);
    }

    if (tracker.best() < best.objective) {
      best.objective = tracker.best();
      best.dictionary = run_dict;
      best.task_weights.clear();
      for (Index t = 0; t < tasks; ++t) best.task_weights.emplace_back(run_coeffs.col(t));
      best.iterations = iterations;
    }
  }

  Index wrong = 0;
  for (Index t = 0; t < tasks; ++t) {
    const auto& ds = datasets[static_cast<std::size_t>(t)];
    wrong += static_cast<Index>(
        std::lround(zero_one_error(ds.inputs, ds.labels, best.task_vector(t)) *
                    static_cast<double>(ds.size())));
  }
  best.training_error = static_cast<double>(wrong) * inv_total;
  return best;
}

}  // namespace mtrl
