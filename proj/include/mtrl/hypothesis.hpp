#pragma once

// Losses, linear predictors and norm-ball projections for the factorized
// hypothesis class x -> <w, D^T x>, with ||w|| <= B and a norm-bounded D.

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "mtrl/error.hpp"

namespace mtrl {

using Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// d x K matrix whose columns are the atoms of a linear feature map.
using Dictionary = Eigen::MatrixXd;
/// Coefficients of a task predictor in feature space.
using TaskWeights = Eigen::VectorXd;

/// Label convention shared by data generation and evaluation: sign(0) = +1.
template <typename Scalar>
constexpr Scalar sign_label(Scalar s) {
  return s >= Scalar(0) ? Scalar(1) : Scalar(-1);
}

/// Unit-margin truncated hinge, values in [0, 1].
template <typename Scalar>
constexpr Scalar truncated_hinge(Scalar t) {
  if (t <= Scalar(0)) return Scalar(1);
  if (t <= Scalar(1)) return Scalar(1) - t;
  return Scalar(0);
}

template <typename Scalar>
struct HingeEval {
  Scalar value;
  Scalar slope;  // an element of the subdifferential in z
};

/// max{0, 1 - z/c} and its subgradient; the kink z == c gets slope 0.
template <typename Scalar>
HingeEval<Scalar> training_hinge(Scalar z, Scalar margin) {
  if (!(margin > Scalar(0))) throw InvalidParameter("training_hinge: margin must be positive");
  if (z < margin) return {Scalar(1) - z / margin, Scalar(-1) / margin};
  return {Scalar(0), Scalar(0)};
}

/// <w, D^T x>.
template <typename DerivedD, typename DerivedW, typename DerivedX>
typename DerivedD::Scalar predict_score(const Eigen::MatrixBase<DerivedD>& dictionary,
                                        const Eigen::MatrixBase<DerivedW>& weights,
                                        const Eigen::MatrixBase<DerivedX>& x) {
  if (dictionary.cols() != weights.size() || dictionary.rows() != x.size())
    throw DimensionMismatch("predict_score: shapes of D, w and x disagree");
  return weights.dot(dictionary.transpose() * x);
}

/// Euclidean (vectors) or Frobenius (matrices) projection onto the ball of radius r.
template <typename Derived>
typename Derived::PlainObject project_norm_ball(const Eigen::MatrixBase<Derived>& m,
                                                typename Derived::Scalar radius) {
  if (!(radius > 0)) throw InvalidParameter("projection radius must be positive");
  using Scalar = typename Derived::Scalar;
  const auto norm = m.norm();
  // A few ulps of slack keep the projection idempotent after rounding.
  if (norm <= radius * (1 + 8 * std::numeric_limits<Scalar>::epsilon())) return m;
  return m * (radius / norm);
}

template <typename Derived>
typename Derived::PlainObject project_l2_ball(const Eigen::MatrixBase<Derived>& v,
                                              typename Derived::Scalar radius) {
  return project_norm_ball(v, radius);
}

template <typename Derived>
typename Derived::PlainObject project_frobenius_ball(const Eigen::MatrixBase<Derived>& m,
                                                     typename Derived::Scalar radius) {
  return project_norm_ball(m, radius);
}

template <typename Derived>
bool has_orthonormal_columns(const Eigen::MatrixBase<Derived>& m, double tol = 1e-10) {
  const Index k = m.cols();
  return ((m.transpose() * m) - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace mtrl
