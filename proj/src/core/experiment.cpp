#include "utri/experiment.hpp"

#include "utri/algebra_checks.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace utri {

namespace {

TrialOutcome expected_outcome(SceneFamily f) {
  switch (f) {
    case SceneFamily::kGeneric: return TrialOutcome::kRecovered;
    case SceneFamily::kBaselineCoplanar: return TrialOutcome::kAmbiguous;
    case SceneFamily::kEpipolarDegenerate: return TrialOutcome::kDegenerate;
  }
  return TrialOutcome::kRecovered;
}

io::json stats(std::vector<double> v) {
  if (v.empty()) return nullptr;
  std::sort(v.begin(), v.end());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  const std::size_t mid = v.size() / 2;
  const double median = v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  return io::json{{"count", v.size()},
                  {"min", v.front()},
                  {"max", v.back()},
                  {"mean", mean},
                  {"median", median}};
}

bool agrees(const TriangulationResult& r, const WorldConfiguration& oracle,
            double tol) {
  if (r.points) {
    return same_configuration({r.points->first, r.points->second}, oracle);
  }
  const SymConfig s = config_to_sym(std::span<const Eigen::VectorXd>(
      std::vector<Eigen::VectorXd>(oracle.begin(), oracle.end())));
  return projective_distance(s.entries(), r.m_delta.entries()) <= tol;
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t level, int t) {
  TrialRecord rec;
  rec.level = level;
  rec.noise_sigma = cfg.noise_levels[level];
  rec.trial = t;
  rec.seed = cfg.seed + static_cast<std::uint64_t>(t);

  const Scene scene = generate_scene(cfg.n, cfg.m, rec.seed, cfg.family, rec.noise_sigma);
  const ObservationSet obs = project_scene(scene);
  const std::vector<SymConfig> ns = sym_observations(obs);

  std::optional<TriangulationResult> result;
  try {
    result = triangulate(scene.rig, ns, cfg.tri);
    rec.residual = result->residual;
    rec.kernel_dim = result->kernel_dim;
    rec.truth_distance =
        projective_distance(result->m_delta.entries(), truth_tensor(scene).entries());
    rec.outcome = result->ambiguous ? TrialOutcome::kAmbiguous
                  : rec.truth_distance <= cfg.success_tol ? TrialOutcome::kRecovered
                                                          : TrialOutcome::kFailed;
  } catch (const Error& e) {
    rec.error = error_code_name(e.code());
    rec.kernel_dim = e.kernel_dim();
    switch (e.code()) {
      case ErrorCode::kAmbiguousTriangulation: rec.outcome = TrialOutcome::kAmbiguous; break;
      case ErrorCode::kDegenerateConfiguration: rec.outcome = TrialOutcome::kDegenerate; break;
      case ErrorCode::kOffVariety:
      case ErrorCode::kInconsistentData:
      case ErrorCode::kNotSplittable:
      case ErrorCode::kComplexPair: rec.outcome = TrialOutcome::kFailed; break;
      default: throw;
    }
  }

  if (cfg.run_oracle) {
    OracleOptions oo;
    oo.tol_rank = cfg.tri.tol_rank;
    oo.tol_residual = cfg.tri.tol_residual;
    oo.budget = cfg.budget;
    std::vector<WorldConfiguration> configs;
    try {
      for (const auto& s : oracle_triangulate(scene.rig, point_observations(obs), oo).configurations) {
        configs.push_back(s.configuration);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kOffVariety) throw;
    }
    rec.oracle_configurations = static_cast<int>(configs.size());
    if (rec.outcome == TrialOutcome::kRecovered) {
      rec.oracle_agrees = configs.size() == 1 && agrees(*result, configs[0], cfg.success_tol);
    } else if (rec.outcome == TrialOutcome::kAmbiguous) {
      rec.oracle_agrees = configs.size() > 1;
    }
  }
  rec.success = rec.outcome == expected_outcome(cfg.family);
  return rec;
}

}  // namespace

const char* trial_outcome_name(TrialOutcome o) {
  switch (o) {
    case TrialOutcome::kRecovered: return "recovered";
    case TrialOutcome::kAmbiguous: return "ambiguous";
    case TrialOutcome::kDegenerate: return "degenerate";
    case TrialOutcome::kFailed: return "failed";
  }
  return "failed";
}

ExperimentConfig experiment_config_from_json(const io::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "experiment config must be an object");
  ExperimentConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "trials") c.trials = v.get<int>();
      else if (key == "n") c.n = v.get<int>();
      else if (key == "m") c.m = v.get<int>();
      else if (key == "noise_levels") c.noise_levels = v.get<std::vector<double>>();
      else if (key == "noise_sigma") c.noise_levels = {v.get<double>()};
      else if (key == "family") c.family = parse_scene_family(v.get<std::string>());
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "tol_rank") c.tri.tol_rank = v.get<double>();
      else if (key == "tol_residual") c.tri.tol_residual = v.get<double>();
      else if (key == "success_tol") c.success_tol = v.get<double>();
      else if (key == "min_success_rate") c.min_success_rate = v.get<double>();
      else if (key == "oracle") c.run_oracle = v.get<bool>();
      else if (key == "budget") c.budget = v.get<std::size_t>();
      else throw Error(ErrorCode::kParse, "unknown experiment key '" + key + "'");
    }
  } catch (const io::json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  if (c.trials < 1 || c.n < 2 || c.m < 2 || c.noise_levels.empty()) {
    throw Error(ErrorCode::kParse, "experiment needs trials >= 1, n >= 2, m >= 2 and a noise level");
  }
  return c;
}

io::json experiment_config_to_json(const ExperimentConfig& c) {
  return io::json{{"trials", c.trials},
                  {"n", c.n},
                  {"m", c.m},
                  {"noise_levels", c.noise_levels},
                  {"family", scene_family_name(c.family)},
                  {"seed", c.seed},
                  {"tol_rank", c.tri.tol_rank},
                  {"tol_residual", c.tri.tol_residual},
                  {"success_tol", c.success_tol},
                  {"min_success_rate", c.min_success_rate},
                  {"oracle", c.run_oracle},
                  {"budget", c.budget}};
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  ExperimentReport report;
  report.config = config;
  for (std::size_t level = 0; level < config.noise_levels.size(); ++level) {
    for (int t = 0; t < config.trials; ++t) {
      try {
        report.trials.push_back(run_trial(config, level, t));
      } catch (const Error& e) {
        throw Error(e.code(), "trial " + std::to_string(t) + ": " + e.what(), e.kernel_dim());
      }
    }
  }

  io::json levels = io::json::array();
  report.passed = true;
  for (std::size_t level = 0; level < config.noise_levels.size(); ++level) {
    std::vector<double> residuals, distances;
    std::map<std::string, int> outcomes, errors, histogram;
    int successes = 0, oracle_runs = 0, agreements = 0, comparable = 0;
    for (const auto& r : report.trials) {
      if (r.level != level) continue;
      successes += r.success;
      ++outcomes[trial_outcome_name(r.outcome)];
      if (!r.error.empty()) ++errors[r.error];
      if (r.residual >= 0.0) residuals.push_back(r.residual);
      if (r.truth_distance >= 0.0) distances.push_back(r.truth_distance);
      if (r.oracle_configurations >= 0) {
        ++oracle_runs;
        ++histogram[std::to_string(r.oracle_configurations)];
        if (r.outcome == TrialOutcome::kRecovered || r.outcome == TrialOutcome::kAmbiguous) {
          ++comparable;
          agreements += r.oracle_agrees;
        }
      }
    }
    const double rate = static_cast<double>(successes) / config.trials;
    const bool passed = rate >= config.min_success_rate;
    report.passed = report.passed && passed;
    io::json oracle = nullptr;
    if (config.run_oracle) {
      oracle = io::json{{"runs", oracle_runs},
                        {"compared", comparable},
                        {"agreements", agreements},
                        {"agreement_rate", comparable ? static_cast<double>(agreements) / comparable : 0.0},
                        {"solution_histogram", histogram}};
    }
    levels.push_back(io::json{{"noise_sigma", config.noise_levels[level]},
                              {"trials", config.trials},
                              {"successes", successes},
                              {"success_rate", rate},
                              {"outcomes", outcomes},
                              {"ambiguity_detected", outcomes["ambiguous"]},
                              {"errors", errors},
                              {"residual", stats(residuals)},
                              {"truth_distance", stats(distances)},
                              {"oracle", oracle},
                              {"passed", passed}});
  }
  report.summary = io::json{{"config", experiment_config_to_json(config)},
                            {"levels", levels},
                            {"passed", report.passed}};
  return report;
}

io::json experiment_to_json(const ExperimentReport& report) { return report.summary; }

std::string experiment_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "level,noise_sigma,trial,seed,outcome,success,error,residual,truth_distance,"
         "kernel_dim,oracle_configurations,oracle_agrees\n";
  for (const auto& r : report.trials) {
    out << r.level << ',' << r.noise_sigma << ',' << r.trial << ',' << r.seed << ','
        << trial_outcome_name(r.outcome) << ',' << r.success << ',' << r.error << ','
        << r.residual << ',' << r.truth_distance << ',' << r.kernel_dim << ','
        << r.oracle_configurations << ',' << r.oracle_agrees << '\n';
  }
  return out.str();
}

io::json verify_ideal(const CameraRig& rig, const IdealCheckOptions& opts) {
  if (opts.views != 2 || rig.size() < 2) {
    throw Error(ErrorCode::kUnsupportedConfiguration,
                "ideal checks are implemented for two views only");
  }
  const CameraRig pair = rig.subset(std::vector<int>{0, 1});
  const VarietySample sample = sample_variety(pair, opts.samples, opts.seed);
  bool passed = true;

  const std::vector<std::tuple<int, int, int>> expected_dims{
      {1, 0, 0}, {0, 1, 0}, {1, 1, 3}, {3, 0, 1}, {0, 3, 1}};
  io::json dims = io::json::object();
  for (const auto& [d1, d2, want] : expected_dims) {
    const FormSpace f = vanishing_forms(sample, d1, d2);
    const bool ok = f.dim == want;
    passed = passed && ok;
    dims[std::to_string(d1) + "," + std::to_string(d2)] =
        io::json{{"dim", f.dim}, {"expected", want}, {"gap_ratio", f.gap_ratio}, {"passed", ok}};
  }

  io::json gens = io::json::object();
  for (const auto& [d1, d2] : std::vector<std::pair<int, int>>{{2, 1}, {1, 2}}) {
    const GeneratorCount g = new_generator_count(sample, d1, d2);
    const bool ok = g.new_generators == 1;
    passed = passed && ok;
    gens[std::to_string(d1) + "," + std::to_string(d2)] =
        io::json{{"vanishing_dim", g.vanishing_dim},
                 {"product_dim", g.product_dim},
                 {"new_generators", g.new_generators},
                 {"expected", 1},
                 {"gap_ratio", g.gap_ratio},
                 {"passed", ok}};
  }

  const GensFund2Report fund2 = check_gens_fund2(pair, sample);
  passed = passed && fund2.contained;

  const std::vector<int> sigma{0, 1};
  const RankProfile ranks = rank_profile(pair, 2, sigma, opts.seed, opts.tol_rank);
  passed = passed && ranks.passed;

  const PencilReport pencil = pencil_check(opts.pencils, opts.seed, opts.tol_rank);
  passed = passed && pencil.passed;

  return io::json{{"views", opts.views},
                  {"samples", opts.samples},
                  {"seed", opts.seed},
                  {"rejected_samples", sample.rejected},
                  {"dims", dims},
                  {"new_generators", gens},
                  {"gensFund2", fund2.contained},
                  {"gensFund2_detail", io::json{{"max_angle", fund2.max_angle},
                                                {"vanishing_dim", fund2.vanishing_dim},
                                                {"entry_span_dim", fund2.entry_span_dim}}},
                  {"rank_profile", io::rank_profile_to_json(ranks)},
                  {"pencil_check", io::pencil_to_json(pencil)},
                  {"passed", passed}};
}

}  // namespace utri
