#include <gtest/gtest.h>

#include <chaplygin/son.hpp>

#include "test_util.hpp"

using namespace chaplygin;
using namespace chaplygin::testing;

TEST(SkewMatrix, RejectsNonAntisymmetric) {
  Mat m = Mat::Zero(3, 3);
  m(0, 1) = 1.0;
  EXPECT_THROW(SkewMatrix::from_matrix(m), DomainError);
  EXPECT_THROW(SkewMatrix::from_matrix(Mat::Zero(2, 3)), DimensionError);
}

TEST(SkewMatrix, CoefficientsRoundTrip) {
  Rng rng(1);
  for (Index n = 2; n <= 6; ++n) {
    const SkewMatrix m = random_skew(n, rng);
    const SkewMatrix back = SkewMatrix::from_coefficients(n, m.coefficients());
    EXPECT_EQ((back.matrix() - m.matrix()).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(SkewMatrix, PairIndexEnumeration) {
  const Index n = 5;
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j, ++k) {
      EXPECT_EQ(pair_index(n, i, j), k);
      EXPECT_EQ(pair_at(n, k), std::make_pair(i, j));
    }
  }
  EXPECT_THROW(pair_index(n, 2, 2), DimensionError);
}

TEST(Wedge, BasisAndAntisymmetry) {
  const SkewMatrix w = wedge(e(3, 0), e(3, 1));
  EXPECT_DOUBLE_EQ(w(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(w(1, 0), -1.0);
  Rng rng(2);
  const Vec x = random_unit(4, rng), y = random_unit(4, rng);
  EXPECT_LT((wedge(x, y) + wedge(y, x)).norm(), 1e-15);
  EXPECT_LT(wedge(x, x).norm(), 1e-15);
  EXPECT_THROW(wedge(e(3, 0), e(4, 0)), DimensionError);
}

TEST(Inner, MatchesCoefficientDotProduct) {
  Rng rng(3);
  for (Index n = 2; n <= 6; ++n) {
    const SkewMatrix a = random_skew(n, rng), b = random_skew(n, rng);
    EXPECT_NEAR(inner(a, b), a.coefficients().dot(b.coefficients()), 1e-13);
    EXPECT_NEAR(inner(a, b), -0.5 * (a.matrix() * b.matrix()).trace(), 1e-13);
  }
  EXPECT_DOUBLE_EQ(inner(SkewMatrix::basis(4, 1, 3), SkewMatrix::basis(4, 1, 3)),
                   1.0);
}

TEST(Commutator, JacobiIdentity) {
  Rng rng(4);
  const SkewMatrix a = random_skew(5, rng), b = random_skew(5, rng),
                   c = random_skew(5, rng);
  const SkewMatrix j = commutator(a, commutator(b, c)) +
                       commutator(b, commutator(c, a)) +
                       commutator(c, commutator(a, b));
  EXPECT_LT(j.norm(), 1e-12);
}

TEST(Commutator, AdInvariance) {
  Rng rng(5);
  const SkewMatrix a = random_skew(4, rng), b = random_skew(4, rng),
                   c = random_skew(4, rng);
  EXPECT_NEAR(inner(commutator(a, b), c), inner(a, commutator(b, c)), 1e-12);
}

TEST(Projection, IdempotentAndOrthogonal) {
  Rng rng(6);
  for (Index n = 3; n <= 6; ++n) {
    const Vec g = random_unit(n, rng);
    const SkewMatrix m = random_skew(n, rng);
    const SkewMatrix ph = proj_h_gamma(m, g);
    EXPECT_LT((proj_h_gamma(ph, g) - ph).norm(), 1e-13);
    EXPECT_NEAR(inner(ph, proj_complement(m, g)), 0.0, 1e-13);
    // so(n-1)^gamma annihilates gamma.
    EXPECT_LT((proj_complement(m, g) * g).norm(), 1e-13);
  }
}

TEST(Projection, WedgeWithGammaIsFixed) {
  Rng rng(7);
  const Vec g = random_unit(5, rng);
  Vec x = random_unit(5, rng);
  x -= x.dot(g) * g;
  const SkewMatrix k = wedge(g, x);
  EXPECT_LT((proj_h_gamma(k, g) - k).norm(), 1e-14);
}

TEST(Rotation, ValidationAndNearest) {
  EXPECT_THROW(RotationMatrix::from_matrix(2.0 * Mat::Identity(3, 3)),
               DomainError);
  Mat reflect = Mat::Identity(3, 3);
  reflect(0, 0) = -1.0;
  EXPECT_THROW(RotationMatrix::from_matrix(reflect), DomainError);
  Rng rng(8);
  const RotationMatrix g = exp_map(random_skew(4, rng));
  EXPECT_LT(g.orthogonality_defect(), 1e-14);
  EXPECT_NEAR(g.matrix().determinant(), 1.0, 1e-13);
  const RotationMatrix again = RotationMatrix::nearest(g.matrix());
  EXPECT_LT((again.matrix() - g.matrix()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Adjoint, PreservesInnerAndCommutes) {
  Rng rng(9);
  const RotationMatrix g = exp_map(random_skew(5, rng));
  const SkewMatrix a = random_skew(5, rng), b = random_skew(5, rng);
  EXPECT_NEAR(inner(adjoint(g, a), adjoint(g, b)), inner(a, b), 1e-12);
  EXPECT_LT((adjoint(g, commutator(a, b)) -
             commutator(adjoint(g, a), adjoint(g, b)))
                .norm(),
            1e-12);
}

TEST(ExpMap, AboutAnAxis) {
  const double t = 0.7;
  const RotationMatrix g = exp_map(t * SkewMatrix::basis(3, 0, 1));
  // exp(t E_1^E_2) rotates the (1,2) plane by -t in the hat convention.
  EXPECT_NEAR(g.matrix()(0, 0), std::cos(t), 1e-14);
  EXPECT_NEAR(g.matrix()(0, 1), std::sin(t), 1e-14);
  EXPECT_NEAR(g.matrix()(2, 2), 1.0, 1e-14);
}

TEST(Hat, IsomorphismProperties) {
  Rng rng(10);
  const Vec x = random_unit(3, rng) * 1.3, y = random_unit(3, rng) * 0.4;
  const Eigen::Vector3d x3(x(0), x(1), x(2)), y3(y(0), y(1), y(2));
  const Eigen::Vector3d c = x3.cross(y3);
  EXPECT_LT((vee(commutator(hat(x), hat(y))) - Vec(c)).norm(), 1e-14);
  EXPECT_LT((vee(wedge(x, y)) + Vec(c)).norm(), 1e-14);
  EXPECT_NEAR(inner(hat(x), hat(y)), x.dot(y), 1e-14);
  EXPECT_LT((hat(x) * y - Vec(c)).norm(), 1e-14);
  EXPECT_LT((vee(hat(x)) - x).norm(), 0.0 + 1e-15);
}
