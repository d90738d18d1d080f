#include "utri/utri.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "utri/experiment.hpp"

struct utri_rig {
  utri::CameraRig rep;
};

struct utri_scene {
  utri::Scene rep;
};

struct utri_observations {
  utri::ObservationSet rep;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_error_json;

int fail(int status, const std::string& message, int kernel_dim = -1) {
  g_last_error = message;
  nlohmann::json err{{"code", utri_status_name(status)}, {"message", message}};
  if (kernel_dim >= 0) err["kernel_dim"] = kernel_dim;
  err["ambiguous"] = status == UTRI_ERR_AMBIGUOUS_TRIANGULATION;
  g_last_error_json = nlohmann::json{{"error", err}}.dump();
  return status;
}

template <class F>
int guarded(F&& f) {
  try {
    f();
    return UTRI_OK;
  } catch (const utri::Error& e) {
    return fail(static_cast<int>(e.code()), e.what(), e.kernel_dim());
  } catch (const std::bad_alloc&) {
    return fail(UTRI_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(UTRI_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string dump(const utri::io::json& j) { return j.dump(2) + "\n"; }

utri::TriangulationOptions tri_options(const utri_options* o) {
  utri::TriangulationOptions t;
  if (o) {
    t.tol_rank = o->tol_rank;
    t.tol_residual = o->tol_residual;
  }
  return t;
}

utri::OracleOptions oracle_options(const utri_options* o) {
  utri::OracleOptions t;
  if (o) {
    t.tol_rank = o->tol_rank;
    t.tol_residual = o->tol_residual;
    t.budget = static_cast<std::size_t>(o->budget);
  }
  return t;
}

void require_views(const utri_rig* rig, const utri_observations* obs) {
  if (rig->rep.size() != obs->rep.views.size()) {
    throw utri::Error(utri::ErrorCode::kShape,
                      "observation views (" + std::to_string(obs->rep.views.size()) +
                          ") differ from cameras (" + std::to_string(rig->rep.size()) + ")");
  }
}

}  // namespace

#define UTRI_REQUIRE(cond)                                                    \
  do {                                                                        \
    if (!(cond)) return fail(UTRI_ERR_INVALID_ARGUMENT, "null argument: " #cond); \
  } while (0)

extern "C" {

const char* utri_version(void) { return "1.0.0"; }

void utri_options_default(utri_options* opts) {
  if (!opts) return;
  opts->tol_rank = utri::kRankTol;
  opts->tol_residual = 1e-6;
  opts->budget = utri::kDefaultBudget;
}

const char* utri_status_name(int status) {
  if (status == UTRI_OK) return "ok";
  if (status == UTRI_ERR_INVALID_ARGUMENT) return "invalid_argument";
  if (status == UTRI_ERR_INTERNAL) return "internal";
  if (status >= UTRI_ERR_DEGENERATE_INPUT && status <= UTRI_ERR_ASSERTION) {
    return utri::error_code_name(static_cast<utri::ErrorCode>(status));
  }
  return "unknown";
}

int utri_exit_code(int status) {
  switch (status) {
    case UTRI_OK: return 0;
    case UTRI_ERR_ASSERTION: return 2;
    case UTRI_ERR_BUDGET_EXCEEDED: return 4;
    default: return 3;
  }
}

const char* utri_last_error(void) { return g_last_error.c_str(); }
const char* utri_last_error_json(void) { return g_last_error_json.c_str(); }

void utri_string_free(char* s) { std::free(s); }

size_t utri_sym_size(int order, int dim) {
  if (order < 1 || dim < 1) return 0;
  return utri::sym_size(order, dim);
}

int utri_rig_create(const double* matrices, size_t n, utri_rig** out) {
  UTRI_REQUIRE(matrices && out);
  return guarded([&] {
    std::vector<utri::Camera> cams;
    for (size_t i = 0; i < n; ++i) {
      utri::Matrix34 a;
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 4; ++c) a(r, c) = matrices[12 * i + 4 * r + c];
      }
      cams.emplace_back(a);
    }
    *out = new utri_rig{utri::CameraRig(std::move(cams))};
  });
}

int utri_rig_canonical(int n, utri_rig** out) {
  UTRI_REQUIRE(out);
  return guarded([&] { *out = new utri_rig{utri::canonical_cameras(n)}; });
}

int utri_rig_random(int n, uint64_t seed, utri_rig** out) {
  UTRI_REQUIRE(out);
  return guarded([&] {
    std::mt19937_64 rng(seed);
    *out = new utri_rig{utri::random_rig(n, rng)};
  });
}

int utri_rig_from_json(const char* json, utri_rig** out) {
  UTRI_REQUIRE(json && out);
  return guarded([&] {
    const auto j = utri::io::parse(json);
    *out = new utri_rig{utri::io::rig_from_json(j.is_object() && j.contains("cameras")
                                                    ? j.at("cameras")
                                                    : j)};
  });
}

size_t utri_rig_size(const utri_rig* rig) { return rig ? rig->rep.size() : 0; }
void utri_rig_destroy(utri_rig* rig) { delete rig; }

int utri_scene_generate(int n, int m, uint64_t seed, const char* family,
                        double noise_sigma, utri_scene** out) {
  UTRI_REQUIRE(out);
  return guarded([&] {
    const utri::SceneFamily f =
        family ? utri::parse_scene_family(family) : utri::SceneFamily::kGeneric;
    *out = new utri_scene{utri::generate_scene(n, m, seed, f, noise_sigma)};
  });
}

int utri_scene_from_json(const char* json, utri_scene** out) {
  UTRI_REQUIRE(json && out);
  return guarded([&] {
    *out = new utri_scene{utri::io::scene_from_json(utri::io::parse(json))};
  });
}

int utri_scene_to_json(const utri_scene* scene, char** out) {
  UTRI_REQUIRE(scene && out);
  return guarded([&] { *out = copy_string(dump(utri::io::scene_to_json(scene->rep))); });
}

int utri_scene_rig(const utri_scene* scene, utri_rig** out) {
  UTRI_REQUIRE(scene && out);
  return guarded([&] { *out = new utri_rig{scene->rep.rig}; });
}

void utri_scene_destroy(utri_scene* scene) { delete scene; }

int utri_project(const utri_scene* scene, utri_observations** out) {
  UTRI_REQUIRE(scene && out);
  return guarded([&] { *out = new utri_observations{utri::project_scene(scene->rep)}; });
}

int utri_observations_from_json(const char* json, utri_observations** out) {
  UTRI_REQUIRE(json && out);
  return guarded([&] {
    *out = new utri_observations{utri::io::observations_from_json(utri::io::parse(json))};
  });
}

int utri_observations_to_json(const utri_observations* obs, char** out) {
  UTRI_REQUIRE(obs && out);
  return guarded(
      [&] { *out = copy_string(dump(utri::io::observations_to_json(obs->rep))); });
}

void utri_observations_destroy(utri_observations* obs) { delete obs; }

int utri_triangulate_json(const utri_rig* rig, const utri_observations* obs,
                          const utri_options* opts, char** out) {
  UTRI_REQUIRE(rig && obs && out);
  return guarded([&] {
    require_views(rig, obs);
    const auto ns = utri::sym_observations(obs->rep);
    const auto r = utri::triangulate(rig->rep, ns, tri_options(opts));
    *out = copy_string(dump(utri::io::triangulation_to_json(r)));
  });
}

int utri_oracle_json(const utri_rig* rig, const utri_observations* obs,
                     const utri_options* opts, char** out) {
  UTRI_REQUIRE(rig && obs && out);
  return guarded([&] {
    require_views(rig, obs);
    const auto r = utri::oracle_triangulate(rig->rep, utri::point_observations(obs->rep),
                                            oracle_options(opts));
    *out = copy_string(dump(utri::io::oracle_to_json(r)));
  });
}

int utri_check_ambiguity_json(const utri_rig* rig, const utri_observations* obs,
                              const utri_options* opts, char** out) {
  UTRI_REQUIRE(rig && obs && out);
  return guarded([&] {
    require_views(rig, obs);
    if (obs->rep.views.size() != 2 || obs->rep.m != 2) {
      throw utri::Error(utri::ErrorCode::kUnsupportedConfiguration,
                        "ambiguity check needs two views of two points");
    }
    (void)opts;
    const auto pts = utri::point_observations(obs->rep);
    const auto d = utri::two_view_ambiguity_check(rig->rep, pts[0][0], pts[0][1],
                                                  pts[1][0], pts[1][1]);
    *out = copy_string(dump(utri::io::diagnosis_to_json(d)));
  });
}

int utri_verify_ideal_json(const utri_rig* rig, int views, size_t samples, uint64_t seed,
                           int pencils, const utri_options* opts, char** out) {
  UTRI_REQUIRE(rig && out);
  return guarded([&] {
    utri::IdealCheckOptions o;
    o.views = views;
    o.samples = samples;
    o.seed = seed;
    o.pencils = pencils;
    if (opts) o.tol_rank = opts->tol_rank;
    *out = copy_string(dump(utri::verify_ideal(rig->rep, o)));
  });
}

int utri_experiment_json(const char* config_json, char** out_json, char** out_csv) {
  UTRI_REQUIRE(config_json && out_json);
  return guarded([&] {
    const auto cfg = utri::experiment_config_from_json(utri::io::parse(config_json));
    const auto report = utri::run_experiment(cfg);
    char* j = copy_string(dump(utri::experiment_to_json(report)));
    if (out_csv) {
      try {
        *out_csv = copy_string(utri::experiment_csv(report));
      } catch (...) {
        std::free(j);
        throw;
      }
    }
    *out_json = j;
  });
}

int utri_triangulate(const utri_rig* rig, int m, size_t n_views, const double* sym_entries,
                     const utri_options* opts, double* m_delta_out, size_t m_delta_len,
                     double* residual_out, int* kernel_dim_out) {
  UTRI_REQUIRE(rig && sym_entries && m_delta_out);
  return guarded([&] {
    if (m < 1) throw utri::Error(utri::ErrorCode::kShape, "order must be positive");
    if (n_views != rig->rep.size()) {
      throw utri::Error(utri::ErrorCode::kShape, "one tensor per camera required");
    }
    const size_t in = utri::sym_size(m, 3);
    const size_t world = utri::sym_size(m, 4);
    if (m_delta_len < world) {
      throw utri::Error(utri::ErrorCode::kShape,
                        "output buffer needs " + std::to_string(world) + " entries");
    }
    std::vector<utri::SymConfig> ns;
    for (size_t v = 0; v < n_views; ++v) {
      ns.emplace_back(m, 3,
                      Eigen::Map<const Eigen::VectorXd>(sym_entries + v * in,
                                                        static_cast<Eigen::Index>(in)));
    }
    const auto r = utri::triangulate(rig->rep, ns, tri_options(opts));
    for (size_t i = 0; i < world; ++i) m_delta_out[i] = r.m_delta.entries()(static_cast<Eigen::Index>(i));
    if (residual_out) *residual_out = r.residual;
    if (kernel_dim_out) *kernel_dim_out = r.kernel_dim;
  });
}

}  // extern "C"
