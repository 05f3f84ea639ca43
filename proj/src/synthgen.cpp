#include "mtrl/synthgen.hpp"

#include <cmath>
#include <string>

namespace mtrl {

Vector Environment::task_vector(Index t) const {
  if (t < 0 || t >= task_count()) throw InvalidParameter("task index out of range");
  return dictionary * task_coeffs[static_cast<std::size_t>(t)];
}

Dictionary sample_haar_dictionary(Index d, Index k, Rng& rng) {
  if (k < 1 || k > d)
    throw InvalidParameter("sample_haar_dictionary: need 1 <= k <= d, got k=" + std::to_string(k) +
                           " d=" + std::to_string(d));
  // Householder QR of a Gaussian matrix; fixing sign(R_ii) > 0 makes Q exactly
  // Haar. The first k columns of Q only depend on the first k Gaussian columns.
  const Matrix gaussian = standard_normal(d, k, rng);
  Eigen::HouseholderQR<Matrix> qr(gaussian);
  Matrix q = qr.householderQ() * Matrix::Identity(d, k);
  const auto r = qr.matrixQR();
  for (Index j = 0; j < k; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

Vector sample_sphere(Index dim, double radius, Rng& rng) {
  if (dim < 1) throw InvalidParameter("sample_sphere: dim must be >= 1");
  if (!(radius > 0)) throw InvalidParameter("sample_sphere: radius must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  double norm = 0.0;
  // The zero vector has probability zero; redraw just in case.
  while (norm == 0.0) {
    for (Index i = 0; i < dim; ++i) v(i) = normal(rng);
    norm = v.norm();
  }
  return radius == 1.0 ? Vector(v / norm) : Vector(radius * (v / norm));
}

Matrix sample_sphere_points(Index n, Index dim, double radius, Rng& rng) {
  Matrix out(n, dim);
  for (Index i = 0; i < n; ++i) out.row(i) = sample_sphere(dim, radius, rng).transpose();
  return out;
}

Environment generate_environment(Index d, Index k_true, Index t_count, double noise_std,
                                 std::optional<double> input_radius, Rng& rng) {
  if (t_count < 1) throw InvalidParameter("generate_environment: need at least one task");
  if (!(noise_std >= 0)) throw InvalidParameter("generate_environment: noise_std must be >= 0");
  const double radius = input_radius.value_or(std::sqrt(static_cast<double>(d)));
  if (!(radius > 0)) throw InvalidParameter("generate_environment: radius must be positive");

  Environment env;
  env.d = d;
  env.k_true = k_true;
  env.dictionary = sample_haar_dictionary(d, k_true, rng);
  env.noise_std = noise_std;
  env.input_radius = radius;
  env.task_coeffs.reserve(static_cast<std::size_t>(t_count));
  for (Index t = 0; t < t_count; ++t) env.task_coeffs.push_back(sample_sphere(k_true, 1.0, rng));
  return env;
}

std::vector<Vector> sample_new_tasks(const Environment& env, Index count, Rng& rng) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i)
    out.push_back(env.dictionary * sample_sphere(env.k_true, 1.0, rng));
  return out;
}

TaskDataset sample_labelled(const Vector& u, Index n, double input_radius, double noise_std,
                            Rng& rng) {
  if (n < 1) throw InvalidParameter("sample_labelled: n must be >= 1");
  if (!(noise_std >= 0)) throw InvalidParameter("sample_labelled: noise_std must be >= 0");
  TaskDataset ds;
  ds.inputs = sample_sphere_points(n, u.size(), input_radius, rng);
  ds.labels.resize(n);
  std::normal_distribution<double> noise(0.0, noise_std > 0 ? noise_std : 1.0);
  for (Index i = 0; i < n; ++i) {
    double s = ds.inputs.row(i).dot(u);
    if (noise_std > 0) s += noise(rng);
    ds.labels(i) = sign_label(s);
  }
  return ds;
}

TaskDataset sample_task_dataset(const Environment& env, Index task_index, Index n, Rng& rng) {
  return sample_labelled(env.task_vector(task_index), n, env.input_radius, env.noise_std, rng);
}

}  // namespace mtrl
