#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "utri/io.hpp"
#include "utri/triangulation.hpp"

namespace utri {

struct ExperimentConfig {
  int trials = 100;
  int n = 2;
  int m = 2;
  std::vector<double> noise_levels{0.0};
  SceneFamily family = SceneFamily::kGeneric;
  std::uint64_t seed = 1;
  TriangulationOptions tri;
  /// Projective distance to the ground truth tensor counted as recovery.
  double success_tol = 1e-8;
  double min_success_rate = 1.0;
  bool run_oracle = true;
  std::size_t budget = kDefaultBudget;
};

/// Unknown keys are rejected; missing keys keep their defaults.
ExperimentConfig experiment_config_from_json(const io::json& j);
io::json experiment_config_to_json(const ExperimentConfig& c);

enum class TrialOutcome { kRecovered, kAmbiguous, kDegenerate, kFailed };
const char* trial_outcome_name(TrialOutcome o);

struct TrialRecord {
  std::size_t level = 0;
  double noise_sigma = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  TrialOutcome outcome = TrialOutcome::kFailed;
  /// Triangulation error code name, empty on success.
  std::string error;
  double residual = -1.0;
  double truth_distance = -1.0;
  int kernel_dim = -1;
  /// -1 when the oracle was not run.
  int oracle_configurations = -1;
  bool oracle_agrees = false;
  /// A trial succeeds when its outcome is the one its scene family predicts.
  bool success = false;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  io::json summary;
  bool passed = false;
};

/// Trial t uses scene seed config.seed + t at every noise level. Errors other
/// than triangulation outcomes are rethrown with the trial index.
ExperimentReport run_experiment(const ExperimentConfig& config);

io::json experiment_to_json(const ExperimentReport& report);

struct IdealCheckOptions {
  int views = 2;
  std::size_t samples = 500;
  std::uint64_t seed = 1;
  int pencils = 20;
  double tol_rank = kRankTol;
};

/// Numerical checks of the two-view vanishing ideal on `rig`: form dimensions
/// per bidegree, new generators, containment in the N2 F N1 entries, rank
/// profile and pencil check. The report's "passed" is the conjunction of all
/// expectations. Only views = 2 is supported.
io::json verify_ideal(const CameraRig& rig, const IdealCheckOptions& opts);
std::string experiment_csv(const ExperimentReport& report);

}  // namespace utri
