#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mtrl/hypothesis.hpp"

namespace mtrl {

/// Fraction of test points (rows) where sign<true_u, x> != sign<learned_u, x>,
/// with sign(0) = +1. A zero learned vector predicts +1 everywhere.
double test_error(const Vector& true_u, const Vector& learned_u, const Matrix& test_inputs);

/// Disagreement probability of two half-spaces under the uniform sphere
/// marginal: arccos(<u, v>) / pi. Both inputs must be unit vectors.
double analytic_err(const Vector& u, const Vector& v);

struct SimilarityResult {
  double value = 0.0;
  bool rank_deficient = false;
};

/// Orthonormal polar factor U V^T of m = U S V^T. Directions with vanishing
/// singular values are completed orthonormally by the SVD.
Matrix orthonormal_polar_factor(const Matrix& m, bool* rank_deficient = nullptr);

/// (1/K) ||D^T Q||_tr where Q is the polar factor of the learned dictionary.
/// When the column counts differ, K is the smaller of the two.
SimilarityResult dictionary_similarity(const Dictionary& learned, const Dictionary& truth);

struct EvaluationReport {
  std::vector<double> per_task_errors;
  double mean_error = 0.0;
  std::optional<double> similarity;
  Index n = 0, T = 0, K = 0, trial = 0;
  std::string method;

  void finalize();
};

}  // namespace mtrl
