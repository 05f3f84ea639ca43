#pragma once

// Synthetic half-space environments: task normals u_t = D c_t with a Haar
// dictionary D and unit coefficients c_t, inputs uniform on a sphere.

#include <optional>
#include <vector>

#include "mtrl/hypothesis.hpp"
#include "mtrl/rng.hpp"

namespace mtrl {

struct Environment {
  Index d = 0;
  Index k_true = 0;
  Dictionary dictionary;           // d x k_true, orthonormal columns
  std::vector<Vector> task_coeffs;  // unit vectors in R^k_true
  double noise_std = 0.0;
  double input_radius = 1.0;

  Index task_count() const { return static_cast<Index>(task_coeffs.size()); }
  /// u_t = D c_t.
  Vector task_vector(Index t) const;
};

struct TaskDataset {
  Matrix inputs;  // n x d, one point per row
  Vector labels;  // n entries in {-1, +1}

  Index size() const { return inputs.rows(); }
  Index dim() const { return inputs.cols(); }
};

/// First k columns of a Haar-distributed d x d orthogonal matrix.
Dictionary sample_haar_dictionary(Index d, Index k, Rng& rng);

/// Uniform point on the sphere of the given radius in R^dim.
Vector sample_sphere(Index dim, double radius, Rng& rng);

/// n x dim matrix of independent sphere points (rows).
Matrix sample_sphere_points(Index n, Index dim, double radius, Rng& rng);

/// Haar dictionary plus t_count unit coefficient vectors. The input radius
/// defaults to sqrt(d).
Environment generate_environment(Index d, Index k_true, Index t_count, double noise_std,
                                 std::optional<double> input_radius, Rng& rng);

/// Fresh task normals D c with c uniform on the unit sphere of R^k_true.
std::vector<Vector> sample_new_tasks(const Environment& env, Index count, Rng& rng);

/// n sphere points labelled sign(<u, x> + noise).
TaskDataset sample_labelled(const Vector& u, Index n, double input_radius, double noise_std,
                            Rng& rng);

TaskDataset sample_task_dataset(const Environment& env, Index task_index, Index n, Rng& rng);

}  // namespace mtrl
