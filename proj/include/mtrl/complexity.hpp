#pragma once

// Covariance norms and Gaussian averages of the linear dictionary class
// {x -> D^T x : sum_k ||d_k||^2 <= K}. Point sets are stored one point per row;
// a T x n multi-sample is stacked into nT rows.

#include <cstdint>

#include "mtrl/hypothesis.hpp"

namespace mtrl {

struct CovarianceSummary {
  double trace_norm = 0.0;     // ||C||_1
  double spectral_norm = 0.0;  // ||C||_inf
  double effective_dimension = 0.0;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  Index samples = 0;
};

/// Norms of C = (1/m) sum_i x_i x_i^T.
CovarianceSummary empirical_covariance_norms(const Matrix& points);

/// Largest eigenvalue of (1/m) X^T X, computed on whichever Gram form is smaller.
double covariance_spectral_norm(const Matrix& points);

/// sup over the dictionary class of sum_{k,i} gamma(k,i) <d_k, x_i>, which by
/// Cauchy-Schwarz equals sqrt(K * ||gamma X||_F^2). gamma is K x m.
double dictionary_class_supremum(const Matrix& gamma, const Matrix& points);

/// Monte-Carlo estimate of the Gaussian average of the linear class on the
/// points. Draw j uses its own stream derived from (seed, j).
McEstimate gaussian_average_linear(const Matrix& points, Index k, Index mc_samples,
                                   std::uint64_t seed);

/// Upper bound K sqrt(m ||C||_1) on that Gaussian average.
double gaussian_average_bound(const Matrix& points, Index k);

/// Exact sup_h ||h(x)|| = sqrt(K m ||C||_inf) over the linear class.
double sup_representation_norm(const Matrix& points, Index k);

/// E max_{y in set} <gamma, y> for a finite set given as rows.
McEstimate gaussian_average_finite_set(const Matrix& set, Index mc_samples, std::uint64_t seed);

}  // namespace mtrl
