#include <cmath>

#include <gtest/gtest.h>

#include "mtrl/hypothesis.hpp"
#include "mtrl/rng.hpp"

using namespace mtrl;

TEST(TruncatedHinge, PiecewiseValues) {
  EXPECT_EQ(truncated_hinge(0.0), 1.0);
  EXPECT_EQ(truncated_hinge(0.5), 0.5);
  EXPECT_EQ(truncated_hinge(2.0), 0.0);
  EXPECT_EQ(truncated_hinge(-3.0), 1.0);
  EXPECT_EQ(truncated_hinge(1.0), 0.0);
  EXPECT_FLOAT_EQ(truncated_hinge(0.25f), 0.75f);
}

TEST(TruncatedHinge, LipschitzAndDominatesZeroOne) {
  // 10^4 (score, label) pairs on a grid.
  for (int i = 0; i < 5000; ++i) {
    const double s = -3.0 + 6.0 * i / 4999.0;
    for (double y : {-1.0, 1.0}) {
      const double zero_one = sign_label(s) != y ? 1.0 : 0.0;
      EXPECT_GE(truncated_hinge(y * s), zero_one) << "s=" << s << " y=" << y;
    }
    const double t = s + 1e-3;
    EXPECT_LE(std::abs(truncated_hinge(t) - truncated_hinge(s)), 1e-3 + 1e-15);
  }
}

TEST(TrainingHinge, ValuesAndSubgradients) {
  const auto kink = training_hinge(3.0, 3.0);
  EXPECT_EQ(kink.value, 0.0);
  EXPECT_EQ(kink.slope, 0.0);
  EXPECT_EQ(training_hinge(0.0, 4.0).value, 1.0);
  const auto neg = training_hinge(-2.0, 2.0);
  EXPECT_DOUBLE_EQ(neg.value, 2.0);
  EXPECT_DOUBLE_EQ(neg.slope, -0.5);
  EXPECT_EQ(training_hinge(5.0, 2.0).value, 0.0);
  EXPECT_THROW(training_hinge(1.0, 0.0), InvalidParameter);
  EXPECT_THROW(training_hinge(1.0, -1.0), InvalidParameter);
}

TEST(PredictScore, IdentityDictionary) {
  const Matrix d = Matrix::Identity(4, 2);
  EXPECT_DOUBLE_EQ(predict_score(d, Vector::Unit(2, 0), Vector::Unit(4, 0)), 1.0);
  Rng rng(1);
  const Vector x = standard_normal(4, 1, rng);
  EXPECT_EQ(predict_score(d, Vector::Zero(2), x), 0.0);
}

TEST(PredictScore, AssociativityAndLinearity) {
  Rng rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    const Matrix d = standard_normal(7, 3, rng);
    const Vector w = standard_normal(3, 1, rng), w2 = standard_normal(3, 1, rng);
    const Vector x = standard_normal(7, 1, rng), x2 = standard_normal(7, 1, rng);
    EXPECT_NEAR(predict_score(d, w, x), (d * w).dot(x), 1e-12);
    EXPECT_NEAR(predict_score(d, w, Vector(x + x2)),
                predict_score(d, w, x) + predict_score(d, w, x2), 1e-10);
    EXPECT_NEAR(predict_score(d, Vector(w + w2), x),
                predict_score(d, w, x) + predict_score(d, w2, x), 1e-10);
  }
}

TEST(PredictScore, DimensionMismatch) {
  EXPECT_THROW(predict_score(Matrix::Identity(4, 2), Vector::Zero(3), Vector::Zero(4)),
               DimensionMismatch);
  EXPECT_THROW(predict_score(Matrix::Identity(4, 2), Vector::Zero(2), Vector::Zero(5)),
               DimensionMismatch);
}

TEST(ProjectL2, InsideUnchangedOutsideScaled) {
  Vector v(2);
  v << 0.3, 0.4;
  EXPECT_TRUE((project_l2_ball(v, 1.0).array() == v.array()).all());
  v << 3.0, 4.0;
  const Vector p = project_l2_ball(v, 1.0);
  EXPECT_NEAR(p(0), 0.6, 1e-15);
  EXPECT_NEAR(p(1), 0.8, 1e-15);
}

TEST(ProjectL2, IdempotentBitwise) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Vector v = standard_normal(5, 1, rng) * 3.0;
    const Vector once = project_l2_ball(v, 1.0);
    const Vector twice = project_l2_ball(once, 1.0);
    EXPECT_TRUE((once.array() == twice.array()).all());
  }
}

TEST(ProjectFrobenius, InsideOutsideIdempotent) {
  Matrix small = Matrix::Constant(2, 2, 0.1);
  EXPECT_TRUE((project_frobenius_ball(small, 1.0).array() == small.array()).all());
  Matrix big(2, 2);
  big << 3, 0, 0, 4;
  const Matrix p = project_frobenius_ball(big, 1.0);
  EXPECT_NEAR(p(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(p(1, 1), 0.8, 1e-15);
  EXPECT_NEAR(p.norm(), 1.0, 1e-15);
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const Matrix m = standard_normal(3, 2, rng) * 2.0;
    const Matrix once = project_frobenius_ball(m, 1.0);
    EXPECT_TRUE((once.array() == project_frobenius_ball(once, 1.0).array()).all());
  }
}

TEST(Projections, Nonexpansive) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const Vector u = standard_normal(4, 1, rng) * 2.0, v = standard_normal(4, 1, rng) * 2.0;
    EXPECT_LE((project_l2_ball(u, 1.0) - project_l2_ball(v, 1.0)).norm(), (u - v).norm() + 1e-12);
    const Matrix a = standard_normal(3, 3, rng) * 2.0, b = standard_normal(3, 3, rng) * 2.0;
    EXPECT_LE((project_frobenius_ball(a, 1.0) - project_frobenius_ball(b, 1.0)).norm(),
              (a - b).norm() + 1e-12);
  }
}

TEST(Projections, RejectNonPositiveRadius) {
  EXPECT_THROW(project_l2_ball(Vector::Ones(2), 0.0), InvalidParameter);
}
