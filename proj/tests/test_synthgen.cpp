#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "mtrl/synthgen.hpp"

using namespace mtrl;

namespace {

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST(HaarDictionary, SquareIsOrthogonal) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    const Dictionary q = sample_haar_dictionary(3, 3, rng);
    EXPECT_TRUE(has_orthonormal_columns(q, 1e-10));
  }
}

TEST(HaarDictionary, DeterministicUnderSeed) {
  Rng a(77), b(77);
  const Dictionary x = sample_haar_dictionary(5, 2, a);
  const Dictionary y = sample_haar_dictionary(5, 2, b);
  EXPECT_TRUE((x.array() == y.array()).all());
}

TEST(HaarDictionary, RejectsBadSizes) {
  Rng rng(1);
  EXPECT_THROW(sample_haar_dictionary(3, 4, rng), InvalidParameter);
  EXPECT_THROW(sample_haar_dictionary(3, 0, rng), InvalidParameter);
}

TEST(HaarDictionary, FirstColumnUniformOnSphere) {
  Rng rng(2024);
  const int draws = 5000;
  const Index d = 20;
  Vector sum = Vector::Zero(d), sq = Vector::Zero(d);
  for (int i = 0; i < draws; ++i) {
    const Vector c = sample_haar_dictionary(d, 1, rng).col(0);
    sum += c;
    sq += c.cwiseProduct(c);
  }
  const Vector mean = sum / draws;
  const Vector var = sq / draws - mean.cwiseProduct(mean);
  EXPECT_LT(mean.cwiseAbs().maxCoeff(), 0.05);
  for (Index j = 0; j < d; ++j) EXPECT_NEAR(var(j), 1.0 / 20.0, 0.01);
}

TEST(HaarDictionary, InvariantUnderFixedRotation) {
  Rng rot_rng(5);
  const Index d = 6, k = 2;
  const Matrix v = sample_haar_dictionary(d, d, rot_rng);
  Rng a(11), b(12);
  std::vector<double> plain, rotated;
  for (int i = 0; i < 5000; ++i) {
    plain.push_back(sample_haar_dictionary(d, k, a)(0, 0));
    rotated.push_back((v * sample_haar_dictionary(d, k, b))(0, 0));
  }
  const double critical = 1.628 * std::sqrt(2.0 / 5000.0);  // alpha = 0.01
  EXPECT_LT(ks_statistic(plain, rotated), critical);
}

TEST(Sphere, NormEqualsRadius) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(sample_sphere(4, 2.0, rng).norm(), 2.0, 1e-9);
}

TEST(Sphere, ZeroSphereIsPlusMinusOne) {
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const double x = sample_sphere(1, 1.0, rng)(0);
    EXPECT_TRUE(x == 1.0 || x == -1.0) << x;
  }
}

TEST(Sphere, IsotropicCovariance) {
  Rng rng(5);
  const Matrix pts = sample_sphere_points(5000, 10, 1.0, rng);
  const Matrix cov = pts.transpose() * pts / 5000.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const double top = eig.eigenvalues().maxCoeff();
  EXPECT_GE(top, 0.08);
  EXPECT_LE(top, 0.12);
}

TEST(Sphere, RejectsNonPositiveRadius) {
  Rng rng(6);
  EXPECT_THROW(sample_sphere(3, 0.0, rng), InvalidParameter);
  EXPECT_THROW(sample_sphere(3, -1.0, rng), InvalidParameter);
}

TEST(Environment, TaskVectorsLieInDictionarySpan) {
  Rng rng(7);
  const Environment env = generate_environment(50, 2, 10, 0.0, std::sqrt(50.0), rng);
  EXPECT_TRUE(has_orthonormal_columns(env.dictionary, 1e-10));
  const Matrix residual_map =
      Matrix::Identity(50, 50) - env.dictionary * env.dictionary.transpose();
  for (Index t = 0; t < env.task_count(); ++t) {
    const Vector u = env.task_vector(t);
    EXPECT_LT((residual_map * u).norm(), 1e-9);
    EXPECT_NEAR(u.norm(), 1.0, 1e-10);
    EXPECT_NEAR(env.task_coeffs[static_cast<std::size_t>(t)].norm(), 1.0, 1e-12);
  }
}

TEST(Environment, FullRankSubspaceGivesUnitNormals) {
  Rng rng(8);
  const Environment env = generate_environment(3, 3, 5, 0.0, std::nullopt, rng);
  EXPECT_NEAR(env.input_radius, std::sqrt(3.0), 1e-15);
  for (Index t = 0; t < 5; ++t) EXPECT_NEAR(env.task_vector(t).norm(), 1.0, 1e-10);
}

TEST(Environment, CoefficientGramHasNearZeroOffDiagonalMean) {
  Rng rng(9);
  const Environment env = generate_environment(50, 2, 1000, 0.0, std::nullopt, rng);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t s = 0; s < env.task_coeffs.size(); ++s)
    for (std::size_t t = s + 1; t < env.task_coeffs.size(); ++t, ++count)
      sum += env.task_coeffs[s].dot(env.task_coeffs[t]);
  EXPECT_LT(std::abs(sum / static_cast<double>(count)), 0.05);
}

TEST(Environment, RejectsBadParameters) {
  Rng rng(10);
  EXPECT_THROW(generate_environment(5, 6, 3, 0.0, std::nullopt, rng), InvalidParameter);
  EXPECT_THROW(generate_environment(5, 2, 0, 0.0, std::nullopt, rng), InvalidParameter);
  EXPECT_THROW(generate_environment(5, 2, 3, -1.0, std::nullopt, rng), InvalidParameter);
}

TEST(TaskDataset, NoiselessLabelsFollowHalfSpace) {
  Rng rng(11);
  const Environment env = generate_environment(10, 2, 3, 0.0, std::nullopt, rng);
  const TaskDataset ds = sample_task_dataset(env, 1, 500, rng);
  const Vector u = env.task_vector(1);
  for (Index i = 0; i < ds.size(); ++i) {
    const double s = ds.inputs.row(i).dot(u);
    EXPECT_EQ(ds.labels(i), s >= 0 ? 1.0 : -1.0);
    EXPECT_NEAR(ds.inputs.row(i).norm(), env.input_radius, 1e-9);
  }
}

TEST(TaskDataset, BalancedLabels) {
  Rng rng(12);
  const Environment env = generate_environment(10, 2, 1, 0.0, std::nullopt, rng);
  const TaskDataset ds = sample_task_dataset(env, 0, 2000, rng);
  const double positive = (ds.labels.array() > 0).cast<double>().mean();
  EXPECT_GE(positive, 0.45);
  EXPECT_LE(positive, 0.55);
}

TEST(TaskDataset, NoiseFlipsSomeButFewerThanHalf) {
  Rng env_rng(13);
  Environment env = generate_environment(50, 2, 1, 0.0, std::sqrt(50.0), env_rng);
  Rng clean_rng(99), noisy_rng(99);
  const TaskDataset clean = sample_task_dataset(env, 0, 4000, clean_rng);
  env.noise_std = 1.0;
  const TaskDataset noisy = sample_task_dataset(env, 0, 4000, noisy_rng);
  ASSERT_TRUE((clean.inputs.array() == noisy.inputs.array()).all());
  const double flips = (clean.labels.array() != noisy.labels.array()).cast<double>().mean();
  EXPECT_GT(flips, 0.0);
  EXPECT_LT(flips, 0.5);
}

TEST(TaskDataset, PropertiesOverRandomEnvironments) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(seed);
    const Index d = 1 + static_cast<Index>(seed % 17);
    const Index k = 1 + static_cast<Index>(seed % static_cast<std::uint64_t>(d));
    const double radius = 0.5 + static_cast<double>(seed % 4);
    const Environment env = generate_environment(d, k, 3, 0.3 * static_cast<double>(seed % 2), radius, rng);
    const TaskDataset ds = sample_task_dataset(env, 2, 40, rng);
    for (Index i = 0; i < ds.size(); ++i) {
      EXPECT_NEAR(ds.inputs.row(i).norm(), radius, 1e-9);
      EXPECT_TRUE(ds.labels(i) == 1.0 || ds.labels(i) == -1.0);
    }
  }
}

TEST(TaskDataset, BitIdenticalUnderSameSeed) {
  auto make = [] {
    Rng rng(31337);
    const Environment env = generate_environment(12, 3, 4, 0.5, std::nullopt, rng);
    return std::make_pair(env, sample_task_dataset(env, 3, 30, rng));
  };
  const auto [e1, d1] = make();
  const auto [e2, d2] = make();
  EXPECT_TRUE((e1.dictionary.array() == e2.dictionary.array()).all());
  EXPECT_TRUE((d1.inputs.array() == d2.inputs.array()).all());
  EXPECT_TRUE((d1.labels.array() == d2.labels.array()).all());
}
