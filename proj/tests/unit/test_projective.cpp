#include <gtest/gtest.h>

#include "test_helpers.hpp"
#include "utri/projective.hpp"

namespace utri {
namespace {

TEST(Normalize, KnownValues) {
  EXPECT_EQ(normalize(Eigen::Vector3d(0, 0, 2)), Eigen::Vector3d(0, 0, 1));
  EXPECT_EQ(normalize(Eigen::Vector3d(-1, 0, 0)), Eigen::Vector3d(1, 0, 0));
  EXPECT_TRUE(normalize(Eigen::Vector3d(3, 4, 0)).isApprox(Eigen::Vector3d(0.6, 0.8, 0), 1e-15));
}

TEST(Normalize, IdempotentBitForBit) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector4d p = normalize(test::random_world(rng) * 37.0);
    const Eigen::Vector4d q = normalize(p);
    EXPECT_EQ(p, q);
    EXPECT_NEAR(p.norm(), 1.0, 1e-15);
  }
}

TEST(Normalize, ZeroVectorThrows) {
  EXPECT_THROW(normalize(Eigen::Vector3d::Zero()), Error);
}

TEST(ProjEqual, KnownValues) {
  EXPECT_TRUE(proj_equal(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(2, 4, 6)));
  EXPECT_FALSE(proj_equal(Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0)));
  EXPECT_TRUE(proj_equal(Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(1, 1e-12, 0), 1e-8));
  EXPECT_TRUE(proj_equal(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(-1, -2, -3)));
}

TEST(ProjEqual, Symmetric) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d a = test::random_image(rng);
    const Eigen::Vector3d b = a + 1e-5 * test::random_image(rng);
    EXPECT_EQ(projective_distance(a, b), projective_distance(b, a));
  }
}

TEST(CollinearDet, KnownValues) {
  using V = Eigen::Vector3d;
  EXPECT_NEAR(collinear_det(V(1, 0, 0), V(0, 1, 0), V(1, 1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(collinear_det(V(1, 0, 0), V(0, 1, 0), V(0, 0, 1))), 1.0, 1e-15);
  EXPECT_NEAR(collinear_det(V(1, 2, 3), V(4, 5, 6), V(7, 8, 9)), 0.0, 1e-14);
}

TEST(CollinearDet, VanishesExactlyOnSpans) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d p = test::random_image(rng), q = test::random_image(rng);
    const Eigen::Vector3d r = uni(rng) * p + uni(rng) * q;
    EXPECT_NEAR(collinear_det(p, q, r), 0.0, 1e-12);
    EXPECT_GT(std::abs(collinear_det(p, q, test::random_image(rng))), 1e-8);
  }
}

TEST(CoplanarDet, KnownValues) {
  const Eigen::Matrix4d e = Eigen::Matrix4d::Identity();
  EXPECT_NEAR(std::abs(coplanar_det(e.col(0), e.col(1), e.col(2), e.col(3))), 1.0, 1e-15);
  EXPECT_NEAR(coplanar_det(e.col(0), e.col(1), Eigen::Vector4d(1, 1, 0, 0), e.col(3)), 0.0, 1e-15);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector4d g1 = test::random_world(rng), g2 = test::random_world(rng),
                          g3 = test::random_world(rng);
    auto in_plane = [&] { return Eigen::Vector4d(uni(rng) * g1 + uni(rng) * g2 + uni(rng) * g3); };
    EXPECT_NEAR(coplanar_det(in_plane(), in_plane(), in_plane(), in_plane()), 0.0, 1e-10);
  }
}

// Plücker coordinates from 2x2 minors of [x y].
Eigen::Matrix<double, 6, 1> minors(const Eigen::Vector4d& x, const Eigen::Vector4d& y) {
  Eigen::Matrix<double, 6, 1> p;
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) p(k++) = x(i) * y(j) - x(j) * y(i);
  return p;
}

TEST(LineThrough, KnownValues) {
  const Eigen::Matrix4d e = Eigen::Matrix4d::Identity();
  Eigen::Matrix<double, 6, 1> p01 = Eigen::Matrix<double, 6, 1>::Zero();
  p01(0) = 1;
  EXPECT_LT(projective_distance(line_through(e.col(0), e.col(1)).coords, p01), 1e-15);
  Eigen::Matrix<double, 6, 1> p23 = Eigen::Matrix<double, 6, 1>::Zero();
  p23(5) = 1;
  EXPECT_LT(projective_distance(line_through(e.col(2), e.col(3)).coords, p23), 1e-15);
  const Eigen::Vector4d x(1, 2, 3, 4);
  EXPECT_THROW(line_through(x, 2 * x), Error);
}

TEST(LineThrough, MatchesMinorsAndRelation) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector4d x = test::random_world(rng), y = test::random_world(rng);
    const PluckerLine l = line_through(x, y);
    EXPECT_LT(projective_distance(l.coords, minors(x, y)), 1e-14);
    EXPECT_LT(projective_distance(l.coords, line_through(y, x).coords), 1e-14);
    EXPECT_NEAR(l.plucker_relation(), 0.0, 1e-14);
    EXPECT_LT(l.incidence_residual(x), 1e-12);
    EXPECT_LT(l.incidence_residual(0.3 * x - 2.0 * y), 1e-12);
    EXPECT_GT(l.incidence_residual(test::random_world(rng)), 1e-6);
  }
}

TEST(LinesMeet, AxesOfAnAffineChart) {
  const Eigen::Vector4d origin(0, 0, 0, 1);
  const PluckerLine xaxis = line_through(origin, Eigen::Vector4d(1, 0, 0, 1));
  const PluckerLine yaxis = line_through(origin, Eigen::Vector4d(0, 1, 0, 1));
  const auto p = lines_meet(xaxis, yaxis);
  ASSERT_TRUE(p.has_value());
  EXPECT_LT(projective_distance(*p, origin), 1e-14);
}

TEST(LinesMeet, CommonPointRecovered) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector4d p = test::random_world(rng);
    const PluckerLine a = line_through(p, test::random_world(rng));
    const PluckerLine b = line_through(p, test::random_world(rng));
    EXPECT_NEAR(reciprocal_product(a, b), 0.0, 1e-14);
    const auto q = lines_meet(a, b);
    ASSERT_TRUE(q.has_value());
    EXPECT_LT(projective_distance(*q, p), 1e-10);
  }
}

TEST(LinesMeet, SkewAndIdentical) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const PluckerLine a = line_through(test::random_world(rng), test::random_world(rng));
    const PluckerLine b = line_through(test::random_world(rng), test::random_world(rng));
    if (std::abs(reciprocal_product(a, b)) < 1e-6) continue;
    EXPECT_FALSE(lines_meet(a, b).has_value());
  }
  const PluckerLine l = line_through(Eigen::Vector4d(1, 2, 3, 4), Eigen::Vector4d(0, 1, 0, 1));
  EXPECT_THROW(lines_meet(l, l), Error);
}

}  // namespace
}  // namespace utri
