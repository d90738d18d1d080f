// Command-line front end over the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "utri/utri.h"

namespace {

using json = nlohmann::json;

struct Globals {
  std::optional<uint64_t> seed;
  double tol_rank = 1e-8;
  double tol_residual = 1e-6;
  double budget = 1e6;
  std::string format = "json";
  std::string out;
};

struct Failure {
  int status;
};

void check(int status) {
  if (status != UTRI_OK) throw Failure{status};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "error: cannot read %s\n", path.c_str());
    throw Failure{UTRI_ERR_PARSE};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string take(char* s) {
  std::string out(s);
  utri_string_free(s);
  return out;
}

struct RigDeleter {
  void operator()(utri_rig* p) const { utri_rig_destroy(p); }
};
struct SceneDeleter {
  void operator()(utri_scene* p) const { utri_scene_destroy(p); }
};
struct ObsDeleter {
  void operator()(utri_observations* p) const { utri_observations_destroy(p); }
};
using RigPtr = std::unique_ptr<utri_rig, RigDeleter>;
using ScenePtr = std::unique_ptr<utri_scene, SceneDeleter>;
using ObsPtr = std::unique_ptr<utri_observations, ObsDeleter>;

ScenePtr load_scene(const std::string& path) {
  utri_scene* s = nullptr;
  check(utri_scene_from_json(read_file(path).c_str(), &s));
  return ScenePtr(s);
}

RigPtr scene_rig(const utri_scene* scene) {
  utri_rig* r = nullptr;
  check(utri_scene_rig(scene, &r));
  return RigPtr(r);
}

ObsPtr load_observations(const std::string& path) {
  utri_observations* o = nullptr;
  check(utri_observations_from_json(read_file(path).c_str(), &o));
  return ObsPtr(o);
}

utri_options options(const Globals& g) {
  utri_options o;
  utri_options_default(&o);
  o.tol_rank = g.tol_rank;
  o.tol_residual = g.tol_residual;
  o.budget = static_cast<uint64_t>(g.budget);
  return o;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void flatten(const json& j, const std::string& path, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out += csv_escape(path) + "," + csv_escape(j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
  }
}

/// JSON documents, or "path,value" rows for --format csv.
std::string render(const std::string& doc, const Globals& g) {
  if (g.format != "csv") return doc;
  std::string out = "path,value\n";
  flatten(json::parse(doc), "", out);
  return out;
}

void emit(const std::string& text, const Globals& g) {
  if (g.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) {
    std::fprintf(stderr, "error: cannot write %s\n", g.out.c_str());
    throw Failure{UTRI_ERR_INVALID_ARGUMENT};
  }
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unlabeled multiview triangulation"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--tol-rank", g.tol_rank, "Relative singular value threshold")
      ->capture_default_str();
  app.add_option("--tol-residual", g.tol_residual, "Accepted reconstruction residual")
      ->capture_default_str();
  app.add_option("--budget", g.budget, "Maximum number of matchings for the oracle")
      ->capture_default_str();
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("-o,--out", g.out, "Write output to a file instead of stdout");

  int n = 2, m = 2;
  std::string family = "generic";
  double noise = 0.0;
  auto* gen = app.add_subcommand("generate-scene", "Random cameras and world points");
  gen->add_option("-n,--views", n, "Number of cameras")->capture_default_str();
  gen->add_option("-m,--points", m, "Number of world points")->capture_default_str();
  gen->add_option("--family", family, "Scene family")
      ->check(CLI::IsMember({"generic", "baseline_coplanar", "epipolar_degenerate"}))
      ->capture_default_str();
  gen->add_option("--noise-sigma", noise, "Observation noise recorded in the scene")
      ->capture_default_str();

  std::string scene_path, obs_path;
  auto* proj = app.add_subcommand("project", "Unlabeled observations of a scene");
  proj->add_option("--scene", scene_path, "Scene file")->required();

  auto* tri = app.add_subcommand("triangulate", "Unlabeled triangulation");
  auto* orc = app.add_subcommand("oracle", "Labeled triangulation of every matching");
  auto* amb = app.add_subcommand("check-ambiguity", "Two-view ambiguity diagnosis");
  for (auto* sub : {tri, orc, amb}) {
    sub->add_option("--scene", scene_path, "Scene file providing the cameras")->required();
    sub->add_option("--observations", obs_path, "Observation file")->required();
  }

  int views = 2, pencils = 20;
  std::size_t samples = 500;
  auto* ideal = app.add_subcommand("verify-ideal", "Numerical checks of the vanishing ideal");
  ideal->add_option("--views", views, "Number of views")->capture_default_str();
  ideal->add_option("--samples", samples, "Variety samples")->capture_default_str();
  ideal->add_option("--pencils", pencils, "Random pencils to test")->capture_default_str();
  ideal->add_option("--scene", scene_path, "Scene file providing the cameras");

  std::string config_path;
  auto* exp = app.add_subcommand("experiment", "Batch of seeded trials");
  exp->add_option("--config", config_path, "Experiment configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  const utri_options opts = options(g);
  try {
    if (*gen) {
      utri_scene* s = nullptr;
      check(utri_scene_generate(n, m, g.seed.value_or(1), family.c_str(), noise, &s));
      ScenePtr scene(s);
      char* text = nullptr;
      check(utri_scene_to_json(scene.get(), &text));
      emit(render(take(text), g), g);
    } else if (*proj) {
      const ScenePtr scene = load_scene(scene_path);
      utri_observations* o = nullptr;
      check(utri_project(scene.get(), &o));
      ObsPtr obs(o);
      char* text = nullptr;
      check(utri_observations_to_json(obs.get(), &text));
      emit(render(take(text), g), g);
    } else if (*tri || *orc || *amb) {
      const ScenePtr scene = load_scene(scene_path);
      const RigPtr rig = scene_rig(scene.get());
      const ObsPtr obs = load_observations(obs_path);
      char* text = nullptr;
      if (*tri) check(utri_triangulate_json(rig.get(), obs.get(), &opts, &text));
      if (*orc) check(utri_oracle_json(rig.get(), obs.get(), &opts, &text));
      if (*amb) check(utri_check_ambiguity_json(rig.get(), obs.get(), &opts, &text));
      emit(render(take(text), g), g);
    } else if (*ideal) {
      RigPtr rig;
      if (scene_path.empty()) {
        utri_rig* r = nullptr;
        check(utri_rig_random(views, g.seed.value_or(1), &r));
        rig.reset(r);
      } else {
        rig = scene_rig(load_scene(scene_path).get());
      }
      char* text = nullptr;
      check(utri_verify_ideal_json(rig.get(), views, samples, g.seed.value_or(1), pencils,
                                   &opts, &text));
      const std::string doc = take(text);
      emit(render(doc, g), g);
      if (!json::parse(doc).at("passed").get<bool>()) return utri_exit_code(UTRI_ERR_ASSERTION);
    } else if (*exp) {
      json cfg = json::parse(read_file(config_path));
      if (g.seed) cfg["seed"] = *g.seed;
      if (!app.get_option("--tol-rank")->empty()) cfg["tol_rank"] = g.tol_rank;
      if (!app.get_option("--tol-residual")->empty()) cfg["tol_residual"] = g.tol_residual;
      if (!app.get_option("--budget")->empty()) cfg["budget"] = static_cast<uint64_t>(g.budget);
      char* text = nullptr;
      char* csv = nullptr;
      check(utri_experiment_json(cfg.dump().c_str(), &text, &csv));
      const std::string doc = take(text);
      const std::string rows = take(csv);
      emit(g.format == "csv" ? rows : doc, g);
      if (!json::parse(doc).at("passed").get<bool>()) return utri_exit_code(UTRI_ERR_ASSERTION);
    }
  } catch (const Failure& f) {
    const char* err = utri_last_error_json();
    if (*err) std::printf("%s\n", err);
    std::fprintf(stderr, "error: %s: %s\n", utri_status_name(f.status), utri_last_error());
    return utri_exit_code(f.status);
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
