#include "mtrl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mtrl {

double test_error(const Vector& true_u, const Vector& learned_u, const Matrix& test_inputs) {
  if (test_inputs.rows() == 0) throw InvalidInput("test_error: empty test set");
  if (true_u.size() != test_inputs.cols() || learned_u.size() != test_inputs.cols())
    throw DimensionMismatch("test_error: vector and input dimensions disagree");
  const Vector truth = test_inputs * true_u;
  const Vector pred = test_inputs * learned_u;
  Index wrong = 0;
  for (Index i = 0; i < truth.size(); ++i)
    if (sign_label(truth(i)) != sign_label(pred(i))) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

double analytic_err(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw DimensionMismatch("analytic_err: dimensions disagree");
  if (std::abs(u.norm() - 1.0) > 1e-8 || std::abs(v.norm() - 1.0) > 1e-8)
    throw InvalidParameter("analytic_err: inputs must be unit vectors");
  return std::acos(std::clamp(u.dot(v), -1.0, 1.0)) / std::numbers::pi;
}

Matrix orthonormal_polar_factor(const Matrix& m, bool* rank_deficient) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (rank_deficient) {
    const double top = s.size() > 0 ? s(0) : 0.0;
    *rank_deficient = top == 0.0 || s(s.size() - 1) <= 1e-10 * top;
  }
  return svd.matrixU() * svd.matrixV().transpose();
}

SimilarityResult dictionary_similarity(const Dictionary& learned, const Dictionary& truth) {
  if (learned.rows() != truth.rows())
    throw DimensionMismatch("dictionary_similarity: dictionaries live in different spaces");
  if (learned.cols() < 1 || truth.cols() < 1 || learned.cols() > learned.rows())
    throw InvalidParameter("dictionary_similarity: bad atom count");
  if (!has_orthonormal_columns(truth, 1e-8))
    throw InvalidParameter("dictionary_similarity: reference dictionary must be orthonormal");
  SimilarityResult out;
  const Matrix q = orthonormal_polar_factor(learned, &out.rank_deficient);
  Eigen::JacobiSVD<Matrix> svd(truth.transpose() * q);
  const double k = static_cast<double>(std::min(learned.cols(), truth.cols()));
  out.value = std::clamp(svd.singularValues().sum() / k, 0.0, 1.0);
  return out;
}

void EvaluationReport::finalize() {
  mean_error = 0.0;
  for (double e : per_task_errors) mean_error += e;
  if (!per_task_errors.empty()) mean_error /= static_cast<double>(per_task_errors.size());
}

}  // namespace mtrl
