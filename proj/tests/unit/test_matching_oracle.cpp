#include <gtest/gtest.h>

#include <algorithm>

#include "test_helpers.hpp"
#include "utri/matching_oracle.hpp"

namespace utri {
namespace {

Observations observe(const CameraRig& rig, const std::vector<WorldPoint>& world) {
  Observations obs;
  for (const auto& cam : rig.cameras()) {
    std::vector<ImagePoint> us;
    for (const auto& x : world) us.push_back(project(cam, x));
    obs.push_back(us);
  }
  return obs;
}

// k points on a plane through the baseline of cameras 0 and 1.
std::vector<WorldPoint> baseline_plane_points(const CameraRig& rig, int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const WorldPoint p = test::random_world(rng);
  std::vector<WorldPoint> pts;
  for (int i = 0; i < k; ++i) {
    const double c = (i % 2 ? 1.0 : -1.0) * (0.5 + 0.5 * std::abs(uni(rng)));
    pts.push_back(uni(rng) * rig[0].focal() + uni(rng) * rig[1].focal() + c * p);
  }
  return pts;
}

TEST(EnumerateMatchings, Counts) {
  EXPECT_EQ(enumerate_matchings(2, 2).size(), 2u);
  EXPECT_EQ(enumerate_matchings(3, 2).size(), 4u);
  EXPECT_EQ(enumerate_matchings(2, 3).size(), 6u);
  EXPECT_EQ(enumerate_matchings(3, 3).size(), 36u);
  const auto ms = enumerate_matchings(3, 3);
  for (const auto& m : ms) {
    for (const auto& perm : m.assignment) {
      std::vector<int> p = perm;
      std::sort(p.begin(), p.end());
      EXPECT_EQ(p, (std::vector<int>{0, 1, 2}));
    }
  }
  try {
    enumerate_matchings(5, 4, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExceeded);
  }
}

TEST(Oracle, GenericUnique) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 30; ++i) {
    const CameraRig rig = random_rig(2 + i % 2, rng);
    const std::vector<WorldPoint> world{test::random_world(rng), test::random_world(rng)};
    const OracleResult r = oracle_triangulate(rig, observe(rig, world));
    ASSERT_EQ(r.configurations.size(), 1u);
    EXPECT_EQ(r.surviving.size(), 1u);
    EXPECT_TRUE(same_configuration(r.configurations[0].configuration, world));
  }
}

TEST(Oracle, BaselineCoplanarPairHasTwoSolutions) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 30; ++i) {
    const CameraRig rig = random_rig(2, rng);
    const auto world = baseline_plane_points(rig, 2, rng);
    const OracleResult r = oracle_triangulate(rig, observe(rig, world));
    EXPECT_EQ(r.configurations.size(), 2u);
    const bool truth_found =
        std::any_of(r.configurations.begin(), r.configurations.end(),
                    [&](const OracleSolution& s) { return same_configuration(s.configuration, world); });
    EXPECT_TRUE(truth_found);
  }
}

TEST(Oracle, ThreeCoplanarPointsGiveSixMatchings) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const CameraRig rig = random_rig(2, rng);
    const auto world = baseline_plane_points(rig, 3, rng);
    const OracleResult r = oracle_triangulate(rig, observe(rig, world));
    EXPECT_EQ(r.surviving.size(), 6u);
    EXPECT_EQ(r.matchings_evaluated, 6u);
  }
}

TEST(Oracle, PermutationInvariant) {
  std::mt19937_64 rng(4);
  const CameraRig rig = random_rig(3, rng);
  const std::vector<WorldPoint> world{test::random_world(rng), test::random_world(rng),
                                     test::random_world(rng)};
  Observations obs = observe(rig, world);
  const OracleResult a = oracle_triangulate(rig, obs);
  std::reverse(obs[1].begin(), obs[1].end());
  std::rotate(obs[2].begin(), obs[2].begin() + 1, obs[2].end());
  const OracleResult b = oracle_triangulate(rig, obs);
  ASSERT_EQ(a.configurations.size(), b.configurations.size());
  EXPECT_TRUE(same_configuration(a.configurations[0].configuration, b.configurations[0].configuration));
}

TEST(Oracle, OffVarietyThrows) {
  std::mt19937_64 rng(5);
  const CameraRig rig = random_rig(2, rng);
  Observations obs{{test::random_image(rng), test::random_image(rng)},
                   {test::random_image(rng), test::random_image(rng)}};
  try {
    oracle_triangulate(rig, obs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOffVariety);
  }
}

TEST(IntersectionDegrees, GenericAndCoplanar) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 10; ++i) {
    const CameraRig rig = random_rig(2, rng);
    const std::vector<WorldPoint> world{test::random_world(rng), test::random_world(rng)};
    const LineArrangement a = intersection_degrees(rig, observe(rig, world));
    ASSERT_EQ(a.clusters.size(), 2u);
    for (const auto& c : a.clusters) {
      EXPECT_EQ(c.degree(), 2);
      for (const auto& cam : rig.cameras()) EXPECT_GT(chordal_distance(c.point, cam.focal()), 1e-6);
    }
    const auto covers = cover_solutions(a, 2, 2);
    ASSERT_EQ(covers.size(), 1u);
    EXPECT_TRUE(same_configuration(covers[0], world));

    const auto plane = baseline_plane_points(rig, 2, rng);
    const LineArrangement b = intersection_degrees(rig, observe(rig, plane));
    EXPECT_EQ(b.clusters.size(), 4u);
    EXPECT_EQ(cover_solutions(b, 2, 2).size(), 2u);
  }
}

TEST(IntersectionDegrees, DegreeLawAndOffVarietyCovers) {
  std::mt19937_64 rng(7);
  const CameraRig rig = random_rig(3, rng);
  const std::vector<WorldPoint> world{test::random_world(rng), test::random_world(rng)};
  const LineArrangement a = intersection_degrees(rig, observe(rig, world));
  for (const auto& x : world) {
    const bool found = std::any_of(a.clusters.begin(), a.clusters.end(), [&](const LineCluster& c) {
      return chordal_distance(c.point, x) < 1e-6 && c.degree() == 3;
    });
    EXPECT_TRUE(found);
  }
  Observations off{{test::random_image(rng), test::random_image(rng)},
                   {test::random_image(rng), test::random_image(rng)},
                   {test::random_image(rng), test::random_image(rng)}};
  EXPECT_TRUE(cover_solutions(intersection_degrees(rig, off), 3, 2).empty());
}

TEST(AmbiguityCheck, Examples) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const CameraRig rig = random_rig(2, rng);
    const std::vector<WorldPoint> world{test::random_world(rng), test::random_world(rng)};
    const Observations o = observe(rig, world);
    const AmbiguityDiagnosis d = two_view_ambiguity_check(rig, o[0][0], o[0][1], o[1][0], o[1][1]);
    EXPECT_TRUE(d.on_variety);
    EXPECT_FALSE(d.ambiguous);
    EXPECT_EQ(d.reconstructions.size(), 1u);
    const AmbiguityDiagnosis swapped =
        two_view_ambiguity_check(rig, o[0][0], o[0][1], o[1][1], o[1][0]);
    EXPECT_TRUE(swapped.on_variety);

    const auto plane = baseline_plane_points(rig, 2, rng);
    const Observations p = observe(rig, plane);
    const AmbiguityDiagnosis dp = two_view_ambiguity_check(rig, p[0][0], p[0][1], p[1][0], p[1][1]);
    EXPECT_TRUE(dp.ambiguous);
    EXPECT_EQ(dp.reconstructions.size(), 2u);
    EXPECT_LT(std::abs(dp.det_view1), 1e-8);
    EXPECT_LT(std::abs(dp.det_view2), 1e-8);
    // Oracle multiplicity agrees with the diagnosis.
    EXPECT_EQ(oracle_triangulate(rig, p).configurations.size() > 1, dp.ambiguous);
    EXPECT_EQ(oracle_triangulate(rig, o).configurations.size() > 1, d.ambiguous);
  }
}

TEST(BaselineCoplanarity, Examples) {
  std::mt19937_64 rng(9);
  const CameraRig rig = random_rig(2, rng);
  EXPECT_TRUE(baseline_coplanarity(rig, baseline_plane_points(rig, 2, rng), 0, 1));
  EXPECT_FALSE(baseline_coplanarity(rig, {test::random_world(rng), test::random_world(rng)}, 0, 1));
  EXPECT_FALSE(baseline_coplanarity(rig, {test::random_world(rng)}, 0, 1));
}

}  // namespace
}  // namespace utri
