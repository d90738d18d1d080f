#include <gtest/gtest.h>

#include "test_helpers.hpp"
#include "utri/experiment.hpp"

namespace utri {
namespace {

TEST(GenerateScene, Deterministic) {
  const auto a = io::scene_to_json(generate_scene(3, 2, 99)).dump();
  const auto b = io::scene_to_json(generate_scene(3, 2, 99)).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, io::scene_to_json(generate_scene(3, 2, 100)).dump());
}

TEST(GenerateScene, GenericIsUniquelyReconstructible) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Scene s = generate_scene(2, 2, seed);
    EXPECT_TRUE(general_position_check(s.rig));
    const OracleResult r = oracle_triangulate(s.rig, point_observations(project_scene(s)));
    EXPECT_EQ(r.configurations.size(), 1u);
  }
}

TEST(GenerateScene, SpecialFamilies) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Scene c = generate_scene(2, 2, seed, SceneFamily::kBaselineCoplanar);
    EXPECT_LT(std::abs(coplanar_det(c.world_points[0], c.world_points[1], c.rig[0].focal(),
                                    c.rig[1].focal())),
              1e-12);
    EXPECT_TRUE(baseline_coplanarity(c.rig, c.world_points, 0, 1));
    const Scene e = generate_scene(2, 2, seed, SceneFamily::kEpipolarDegenerate);
    EXPECT_LT(line_through(e.rig[0].focal(), e.rig[1].focal()).incidence_residual(e.world_points[0]),
              1e-12);
    EXPECT_LT(projective_distance(project(e.rig[0], e.world_points[0]), epipole(e.rig, 0, 1)), 1e-12);
  }
}

TEST(ProjectScene, RepresentationsConsistent) {
  const Scene s = generate_scene(4, 3, 5);
  const ObservationSet obs = project_scene(s);
  ASSERT_EQ(obs.views.size(), 4u);
  bool shuffled = false;
  for (std::size_t v = 0; v < obs.views.size(); ++v) {
    const auto& view = obs.views[v];
    ASSERT_TRUE(view.sym.has_value());
    PointList pts(view.points.begin(), view.points.end());
    EXPECT_LT((view.sym->entries() - config_to_sym(pts).entries()).norm(), 1e-15);
    for (std::size_t i = 0; i < view.points.size(); ++i) {
      if (projective_distance(view.points[i], project(s.rig[v], s.world_points[i])) > 1e-12) shuffled = true;
    }
  }
  EXPECT_TRUE(shuffled);
  EXPECT_EQ(io::observations_to_json(obs).dump(), io::observations_to_json(project_scene(s)).dump());
}

TEST(ProjectScene, RoundTripThroughTriangulation) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Scene s = generate_scene(2 + static_cast<int>(seed % 2), 2, seed);
    const TriangulationResult r = triangulate(s.rig, sym_observations(project_scene(s)));
    EXPECT_LT(projective_distance(r.m_delta.entries(), truth_tensor(s).entries()), 1e-8);
  }
}

TEST(Io, ByteStableRoundTrips) {
  Scene s = generate_scene(3, 2, 17, SceneFamily::kGeneric, 1e-6);
  const std::string a = io::scene_to_json(s).dump(2);
  const std::string b = io::scene_to_json(io::scene_from_json(io::parse(a))).dump(2);
  EXPECT_EQ(a, b);
  const std::string c = io::observations_to_json(project_scene(s)).dump(2);
  const std::string d = io::observations_to_json(io::observations_from_json(io::parse(c))).dump(2);
  EXPECT_EQ(c, d);
}

TEST(Io, SchemaErrors) {
  auto code = [](const std::string& text) {
    try {
      io::observations_from_json(io::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kAssertion;
  };
  EXPECT_EQ(code("{"), ErrorCode::kParse);
  EXPECT_EQ(code(R"({"m":2,"views":[{"points":[[1,0,0]]},{"points":[[1,0,0],[0,1,0]]}]})"),
            ErrorCode::kParse);
  EXPECT_EQ(code(R"({"m":2,"views":[{"points":[[1,0,0],[0,1,0]],"authoritative":"sym"},)"
                 R"({"points":[[1,0,0],[0,1,0]]}]})"),
            ErrorCode::kParse);
  const auto obs = io::observations_from_json(io::parse(
      R"({"m":2,"views":[{"sym":{"order":2,"dim":3,"entries":[0,1,0,0,0,0]}},)"
      R"({"points":[[1,0,0],[0,1,0]]}]})"));
  EXPECT_EQ(obs.views[0].authority, ViewObservation::Authority::kSym);
  const auto pts = point_observations(obs);
  EXPECT_EQ(pts[0].size(), 2u);
  try {
    io::scene_from_json(io::parse(R"({"cameras":[{"matrix":[[1,0,0,0],[0,1,0,0],[0,0,1,0]]}]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(Experiment, GenericAllSucceed) {
  ExperimentConfig c;
  c.trials = 100;
  const ExperimentReport r = run_experiment(c);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.summary["levels"][0]["success_rate"], 1.0);
  EXPECT_EQ(r.summary["levels"][0]["oracle"]["agreement_rate"], 1.0);
}

TEST(Experiment, BaselineCoplanarAmbiguous) {
  ExperimentConfig c;
  c.trials = 100;
  c.family = SceneFamily::kBaselineCoplanar;
  const ExperimentReport r = run_experiment(c);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.summary["levels"][0]["ambiguity_detected"], 100);
  EXPECT_EQ(r.summary["levels"][0]["oracle"]["solution_histogram"]["2"], 100);
}

TEST(Experiment, ConfigAndErrorPropagation) {
  EXPECT_THROW(experiment_config_from_json(io::parse(R"({"trails": 3})")), Error);
  const ExperimentConfig c = experiment_config_from_json(
      io::parse(R"({"trials": 3, "n": 2, "m": 3, "oracle": false})"));
  try {
    run_experiment(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedConfiguration);
    EXPECT_EQ(std::string(e.what()).rfind("trial 0:", 0), 0u);
  }
}

TEST(Experiment, CsvHasOneRowPerTrial) {
  ExperimentConfig c;
  c.trials = 5;
  c.noise_levels = {0.0, 1e-6};
  c.n = 3;
  const std::string csv = experiment_csv(run_experiment(c));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
}

}  // namespace
}  // namespace utri
