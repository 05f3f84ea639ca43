#include "mtrl/complexity.hpp"

#include <cmath>

#include "mtrl/rng.hpp"

namespace mtrl {

namespace {

McEstimate summarize(const Vector& values) {
  McEstimate out;
  out.samples = values.size();
  out.mean = values.mean();
  if (values.size() > 1) {
    const double var = (values.array() - out.mean).square().sum() /
                       static_cast<double>(values.size() - 1);
    out.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return out;
}

void check_points(const Matrix& points) {
  if (points.rows() == 0 || points.cols() == 0) throw InvalidInput("point set is empty");
}

}  // namespace

double covariance_spectral_norm(const Matrix& points) {
  check_points(points);
  const Index m = points.rows();
  const Index d = points.cols();
  // X^T X and X X^T share their nonzero spectrum.
  const Matrix gram = d <= m ? Matrix(points.transpose() * points) : Matrix(points * points.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  return std::max(0.0, eig.eigenvalues().maxCoeff()) / static_cast<double>(m);
}

CovarianceSummary empirical_covariance_norms(const Matrix& points) {
  check_points(points);
  CovarianceSummary out;
  out.trace_norm = points.squaredNorm() / static_cast<double>(points.rows());
  out.spectral_norm = covariance_spectral_norm(points);
  out.effective_dimension = out.spectral_norm > 0 ? out.trace_norm / out.spectral_norm : 0.0;
  return out;
}

double dictionary_class_supremum(const Matrix& gamma, const Matrix& points) {
  if (gamma.cols() != points.rows())
    throw DimensionMismatch("dictionary_class_supremum: gamma must be K x m");
  const double k = static_cast<double>(gamma.rows());
  return std::sqrt(k * (gamma * points).squaredNorm());
}

McEstimate gaussian_average_linear(const Matrix& points, Index k, Index mc_samples,
                                   std::uint64_t seed) {
  check_points(points);
  if (k < 1) throw InvalidParameter("gaussian_average_linear: k must be >= 1");
  if (mc_samples < 1) throw InvalidParameter("gaussian_average_linear: need mc_samples >= 1");
  Vector sups(mc_samples);
  for (Index j = 0; j < mc_samples; ++j) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(j)}));
    sups(j) = dictionary_class_supremum(standard_normal(k, points.rows(), rng), points);
  }
  return summarize(sups);
}

double gaussian_average_bound(const Matrix& points, Index k) {
  check_points(points);
  const auto m = static_cast<double>(points.rows());
  return static_cast<double>(k) * std::sqrt(m * empirical_covariance_norms(points).trace_norm);
}

double sup_representation_norm(const Matrix& points, Index k) {
  check_points(points);
  if (k < 1) throw InvalidParameter("sup_representation_norm: k must be >= 1");
  const auto m = static_cast<double>(points.rows());
  return std::sqrt(static_cast<double>(k) * m * covariance_spectral_norm(points));
}

McEstimate gaussian_average_finite_set(const Matrix& set, Index mc_samples, std::uint64_t seed) {
  check_points(set);
  if (mc_samples < 1) throw InvalidParameter("gaussian_average_finite_set: need mc_samples >= 1");
  Vector sups(mc_samples);
  for (Index j = 0; j < mc_samples; ++j) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(j)}));
    const Vector gamma = standard_normal(set.cols(), 1, rng);
    sups(j) = (set * gamma).maxCoeff();
  }
  return summarize(sups);
}

}  // namespace mtrl
