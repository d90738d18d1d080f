#include <gtest/gtest.h>

#include "test_helpers.hpp"
#include "utri/triangulation.hpp"

namespace utri {
namespace {

struct ExactScene {
  CameraRig rig;
  PointList world;
  std::vector<SymConfig> images;
};

// Images built from projected points, independent of the lifted maps.
ExactScene exact_scene(int n, int m, std::mt19937_64& rng) {
  ExactScene s{random_rig(n, rng), {}, {}};
  for (int i = 0; i < m; ++i) s.world.emplace_back(test::random_world(rng));
  for (const auto& cam : s.rig.cameras()) {
    PointList us;
    for (const auto& x : s.world) us.emplace_back(Eigen::Vector3d(cam.matrix() * x));
    s.images.push_back(config_to_sym(us));
  }
  return s;
}

TEST(BuildB, Shapes) {
  std::mt19937_64 rng(1);
  const ExactScene s2 = exact_scene(3, 2, rng);
  const std::vector<int> two{0, 1}, three{0, 1, 2};
  EXPECT_EQ(build_B(s2.rig, std::span(s2.images).first(2), two).b.rows(), 12);
  EXPECT_EQ(build_B(s2.rig, std::span(s2.images).first(2), two).b.cols(), 12);
  EXPECT_EQ(build_B(s2.rig, s2.images, three).b.rows(), 18);
  EXPECT_EQ(build_B(s2.rig, s2.images, three).b.cols(), 13);
  const ExactScene s3 = exact_scene(4, 3, rng);
  const std::vector<int> four{0, 1, 2, 3};
  const StackedSystem b3 = build_B(s3.rig, s3.images, four);
  EXPECT_EQ(b3.b.rows(), 40);
  EXPECT_EQ(b3.b.cols(), 24);

  std::vector<SymConfig> mixed{s2.images[0], s3.images[1]};
  try {
    build_B(s2.rig, mixed, two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShape);
  }
}

TEST(Quartic, DoubleRootExample) {
  const DoubleRootFit fit = fit_double_roots({0.0, 0.0, 9.0, -6.0, 1.0}, 1e-12);
  EXPECT_DOUBLE_EQ(fit.c, 3.0);
  EXPECT_EQ(fit.low_order, 0.0);
  EXPECT_EQ(fit.discriminant, 0.0);
  EXPECT_THROW(fit_double_roots({0.0, 0.0, 1.0, 0.0, 1.0}, 1e-12), Error);
  try {
    fit_double_roots({0.0, 0.0, 0.0, 0.0, 0.0}, 1e-12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAmbiguousTriangulation);
  }
}

TEST(Quartic, InterpolationMatchesDeterminants) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    Eigen::Matrix4d a = Eigen::Matrix4d::Random(), b = Eigen::Matrix4d::Random();
    a = (a + a.transpose()).eval();
    b = (b + b.transpose()).eval();
    const auto c = pencil_quartic(a, b);
    for (int s = 0; s < 5; ++s) {
      const double t = uni(rng);
      const double direct = (t * a + (1 - t) * b).determinant();
      const double poly = c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * c[4])));
      EXPECT_NEAR(poly, direct, 1e-10 * (1 + std::abs(direct)));
    }
  }
}

TEST(TwoView, RoundTripAndKernelStructure) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const ExactScene s = exact_scene(2, 2, rng);
    const TriangulationResult r = triangulate_two_view(s.rig, s.images[0], s.images[1]);
    const SymConfig truth = config_to_sym(s.world);
    EXPECT_LT(projective_distance(r.m_delta.entries(), truth.entries()), 1e-8);
    EXPECT_EQ(r.kernel_dim, 2);
    EXPECT_FALSE(r.ambiguous);
    ASSERT_TRUE(r.points.has_value());
    EXPECT_TRUE(test::same_pair(r.points->first, r.points->second, s.world[0], s.world[1], 1e-6));

    const std::vector<int> sigma{0, 1};
    const StackedSystem sys = build_B(s.rig, s.images, sigma);
    EXPECT_EQ(numerical_rank(sys.b, 1e-8).rank, 10);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(12);
    f.head(10) = unlabeled_focal_point(s.rig, sigma).entries();
    Eigen::VectorXd k(12);
    k << r.m_delta.entries(), -r.scales;
    EXPECT_LT((sys.b * f).norm() / sys.b.norm(), 1e-8);
    EXPECT_LT((sys.b * k).norm() / sys.b.norm(), 1e-8);
    for (Eigen::Index v = 0; v < 2; ++v) EXPECT_GT(std::abs(r.scales(v)), 1e-6);

    const auto fit = fit_double_roots(
        pencil_quartic(r.m_delta.matrix(), unlabeled_focal_point(s.rig, sigma).matrix()), 1e-8);
    EXPECT_LT(fit.low_order, 1e-8);
    EXPECT_NEAR(fit.c, 1.0, 1e-6);
  }
}

TEST(TwoView, EpipoleObservationSignalsDegeneracy) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const CameraRig rig = random_rig(2, rng);
    const SymConfig n1 = pair_to_sym(epipole(rig, 0, 1), test::random_image(rng));
    const SymConfig n2 = pair_to_sym(test::random_image(rng), test::random_image(rng));
    const std::vector<SymConfig> ns{n1, n2};
    const std::vector<int> sigma{0, 1};
    EXPECT_LE(numerical_rank(build_B(rig, ns, sigma).b, 1e-8).rank, 10);
    try {
      triangulate_two_view(rig, n1, n2);
      FAIL();
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == ErrorCode::kDegenerateConfiguration ||
                  e.code() == ErrorCode::kAmbiguousTriangulation ||
                  e.code() == ErrorCode::kOffVariety)
          << error_code_name(e.code());
    }
  }
}

TEST(TwoView, OffVarietyRejected) {
  std::mt19937_64 rng(5);
  const CameraRig rig = random_rig(2, rng);
  const SymConfig n1 = pair_to_sym(test::random_image(rng), test::random_image(rng));
  const SymConfig n2 = pair_to_sym(test::random_image(rng), test::random_image(rng));
  try {
    triangulate_two_view(rig, n1, n2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOffVariety);
    EXPECT_EQ(e.kernel_dim(), 1);
  }
}

TEST(Multiview, CanonicalThreeViews) {
  const CameraRig rig = canonical_cameras(3);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    const PointList world{test::random_world(rng), test::random_world(rng)};
    std::vector<SymConfig> ns;
    for (const auto& c : rig.cameras()) ns.push_back(pair_to_sym(c.matrix() * world[0], c.matrix() * world[1]));
    const TriangulationResult r = triangulate_multiview(rig, ns);
    EXPECT_EQ(r.kernel_dim, 1);
    EXPECT_LT(projective_distance(r.m_delta.entries(), config_to_sym(world).entries()), 1e-10);
  }
}

TEST(Multiview, OrderThree) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10; ++i) {
    const ExactScene s = exact_scene(4, 3, rng);
    const TriangulationResult r = triangulate(s.rig, s.images);
    EXPECT_EQ(r.kernel_dim, 1);
    EXPECT_LT(projective_distance(r.m_delta.entries(), config_to_sym(s.world).entries()), 1e-8);
  }
  const ExactScene s = exact_scene(3, 3, rng);
  const std::vector<int> sigma{0, 1, 2};
  const StackedSystem sys = build_B(s.rig, s.images, sigma);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(sys.b.cols());
  f.head(20) = unlabeled_focal_point(s.rig, sigma).entries();
  EXPECT_LT((sys.b * f).norm() / sys.b.norm(), 1e-10);
  try {
    triangulate_multiview(s.rig, s.images);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateConfiguration);
    EXPECT_GE(e.kernel_dim(), 2);
  }
}

TEST(Dispatch, Routes) {
  std::mt19937_64 rng(8);
  const ExactScene two = exact_scene(2, 2, rng);
  EXPECT_EQ(triangulate(two.rig, two.images).kernel_dim, 2);
  const ExactScene three = exact_scene(3, 2, rng);
  EXPECT_EQ(triangulate(three.rig, three.images).kernel_dim, 1);
  const ExactScene m3 = exact_scene(2, 3, rng);
  try {
    triangulate(m3.rig, m3.images);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedConfiguration);
  }
}

TEST(Multiview, NoisyRankTwoProjection) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss(0.0, 1e-6);
  for (int i = 0; i < 20; ++i) {
    const ExactScene s = exact_scene(3, 2, rng);
    std::vector<SymConfig> noisy;
    for (const auto& cam : s.rig.cameras()) {
      PointList us;
      for (const auto& x : s.world) {
        Eigen::Vector3d u = normalize(Eigen::Vector3d(cam.matrix() * x));
        for (int c = 0; c < 3; ++c) u(c) += gauss(rng);
        us.emplace_back(u);
      }
      noisy.push_back(config_to_sym(us));
    }
    const TriangulationResult r = triangulate(s.rig, noisy);
    EXPECT_LT(projective_distance(r.m_delta.entries(), config_to_sym(s.world).entries()), 1e-3);
    EXPECT_LT(std::abs(r.m_delta.matrix().determinant()), 1e-12);
    EXPECT_GE(r.residual, r.rank2_distance);
  }
}

TEST(Equivariance, ProjectiveChangeOfCoordinates) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 20; ++i) {
    const ExactScene s = exact_scene(3, 2, rng);
    Eigen::Matrix4d h = Eigen::Matrix4d::Random() + 2 * Eigen::Matrix4d::Identity();
    std::vector<Camera> moved;
    for (const auto& c : s.rig.cameras()) moved.emplace_back(Matrix34(c.matrix() * h));
    const CameraRig rig2(std::move(moved));
    const TriangulationResult a = triangulate(s.rig, s.images);
    const TriangulationResult b = triangulate(rig2, s.images);
    const Eigen::Matrix4d hinv = h.inverse();
    const Eigen::Matrix4d expected = hinv * a.m_delta.matrix() * hinv.transpose();
    EXPECT_LT(projective_distance(b.m_delta.matrix().reshaped(), expected.reshaped()), 1e-8);
  }
}

// Roots of det(alpha*M1 + (1-alpha)*M2) are -eig((M1-M2)^-1 M2).
TEST(PencilRank2Points, GeneralizedEigenvalueOracle) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const SymConfig m1 = pair_to_sym(test::random_world(rng), test::random_world(rng));
    const SymConfig m2 = pair_to_sym(test::random_world(rng), test::random_world(rng));
    const auto pts = pencil_rank2_points(m1, m2);
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_NEAR(pts[0].first, 0.0, 1e-12);
    EXPECT_NEAR(pts[1].first, 1.0, 1e-6);
    const Eigen::Matrix4d d = m1.matrix() - m2.matrix();
    Eigen::VectorXcd eig = (d.inverse() * m2.matrix()).eigenvalues();
    std::vector<double> roots;
    for (Eigen::Index k = 0; k < 4; ++k) roots.push_back(-eig(k).real());
    std::sort(roots.begin(), roots.end());
    EXPECT_NEAR(roots[0], 0.0, 1e-6);
    EXPECT_NEAR(roots[1], 0.0, 1e-6);
    EXPECT_NEAR(roots[2], 1.0, 1e-6);
    EXPECT_NEAR(roots[3], 1.0, 1e-6);
  }
  const SymConfig m = pair_to_sym(Eigen::Vector4d(1, 2, 3, 4), Eigen::Vector4d(0, 1, 0, 2));
  EXPECT_THROW(pencil_rank2_points(m, m), Error);
}

TEST(PencilRank2Points, CrossCheckWithTwoView) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20; ++i) {
    const ExactScene s = exact_scene(2, 2, rng);
    const std::vector<int> sigma{0, 1};
    const StackedSystem sys = build_B(s.rig, s.images, sigma);
    const SymConfig f12 = unlabeled_focal_point(s.rig, sigma);
    // A kernel member that is not the focal pair.
    const Eigen::MatrixXd k = smallest_right_singular_vectors(sys.b, 2);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(12);
    f.head(10) = f12.entries();
    const Eigen::Vector2d c = k.transpose() * f;
    const Eigen::VectorXd w = k * Eigen::Vector2d(-c(1), c(0));
    const SymConfig m(2, 4, w.head(10));
    const auto pts = pencil_rank2_points(m, f12);
    const double alpha = pts[0].first == 0.0 ? pts[1].first : pts[0].first;
    const SymConfig member = pts[0].first == 0.0 ? pts[1].second : pts[0].second;
    EXPECT_LT(projective_distance(member.entries(), config_to_sym(s.world).entries()), 1e-8);
    EXPECT_TRUE(std::isfinite(alpha));
  }
}

}  // namespace
}  // namespace utri
