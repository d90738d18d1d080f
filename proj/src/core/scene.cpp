#include "utri/scene.hpp"

#include <algorithm>
#include <random>

namespace utri {

const char* scene_family_name(SceneFamily f) {
  switch (f) {
    case SceneFamily::kGeneric: return "generic";
    case SceneFamily::kBaselineCoplanar: return "baseline_coplanar";
    case SceneFamily::kEpipolarDegenerate: return "epipolar_degenerate";
  }
  return "generic";
}

SceneFamily parse_scene_family(const std::string& name) {
  if (name == "generic") return SceneFamily::kGeneric;
  if (name == "baseline_coplanar") return SceneFamily::kBaselineCoplanar;
  if (name == "epipolar_degenerate") return SceneFamily::kEpipolarDegenerate;
  throw Error(ErrorCode::kParse, "unknown scene family '" + name + "'");
}

namespace {

// Separate stream for observation noise and shuffling.
constexpr std::uint64_t kObservationStream = 0x9E3779B97F4A7C15ull;

WorldPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  WorldPoint x;
  for (int i = 0; i < 4; ++i) x(i) = uni(rng);
  return x;
}

double away_from_zero(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.3, 1.0);
  std::bernoulli_distribution sign(0.5);
  const double v = mag(rng);
  return sign(rng) ? v : -v;
}

bool projects_everywhere(const CameraRig& rig, const WorldPoint& x) {
  for (const auto& c : rig.cameras()) {
    if (chordal_distance(x, c.focal()) < 1e-3) return false;
  }
  return true;
}

}  // namespace

Scene generate_scene(int n, int m, std::uint64_t seed, SceneFamily family,
                     double noise_sigma) {
  if (n < 2 || m < 1) {
    throw Error(ErrorCode::kShape, "scenes need n >= 2 cameras and m >= 1 points");
  }
  if (noise_sigma < 0.0) throw Error(ErrorCode::kShape, "negative noise level");
  std::mt19937_64 rng(seed);
  Scene s;
  s.seed = seed;
  s.noise_sigma = noise_sigma;
  s.family = family;
  s.rig = random_rig(n, rng);
  const WorldPoint f1 = s.rig[0].focal();
  const WorldPoint f2 = s.rig[1].focal();
  const WorldPoint plane_point = random_point(rng);

  while (static_cast<int>(s.world_points.size()) < m) {
    WorldPoint x;
    if (family == SceneFamily::kBaselineCoplanar) {
      std::uniform_real_distribution<double> uni(-1.0, 1.0);
      const double a = uni(rng);
      const double b = uni(rng);
      x = a * f1 + b * f2 + away_from_zero(rng) * plane_point;
    } else if (family == SceneFamily::kEpipolarDegenerate && s.world_points.empty()) {
      x = away_from_zero(rng) * f1 + away_from_zero(rng) * f2;
    } else {
      x = random_point(rng);
    }
    const bool on_baseline = family == SceneFamily::kEpipolarDegenerate &&
                             s.world_points.empty();
    if (!on_baseline && !projects_everywhere(s.rig, x)) continue;
    s.world_points.push_back(x);
  }
  return s;
}

ObservationSet project_scene(const Scene& scene) {
  std::mt19937_64 rng(scene.seed ^ kObservationStream);
  std::normal_distribution<double> noise(0.0, 1.0);
  ObservationSet obs;
  obs.m = static_cast<int>(scene.world_points.size());
  for (const auto& cam : scene.rig.cameras()) {
    ViewObservation view;
    for (const auto& x : scene.world_points) {
      ImagePoint u = project(cam, x);
      if (scene.noise_sigma > 0.0) {
        for (int i = 0; i < 3; ++i) u(i) += scene.noise_sigma * noise(rng);
        u = normalize(u);
      }
      view.points.push_back(u);
    }
    // Fisher-Yates with an explicit draw so the order only depends on rng.
    for (std::size_t i = view.points.size(); i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(view.points[i - 1], view.points[pick(rng)]);
    }
    PointList pts(view.points.begin(), view.points.end());
    view.sym = config_to_sym(pts);
    view.authority = ViewObservation::Authority::kPoints;
    obs.views.push_back(std::move(view));
  }
  return obs;
}

std::vector<SymConfig> sym_observations(const ObservationSet& obs) {
  std::vector<SymConfig> out;
  for (const auto& v : obs.views) {
    if (v.sym && v.authority == ViewObservation::Authority::kSym) {
      out.push_back(v.sym->normalized());
    } else if (!v.points.empty()) {
      PointList pts(v.points.begin(), v.points.end());
      out.push_back(config_to_sym(pts));
    } else if (v.sym) {
      out.push_back(v.sym->normalized());
    } else {
      throw Error(ErrorCode::kShape, "view carries no observation");
    }
  }
  return out;
}

Observations point_observations(const ObservationSet& obs) {
  Observations out;
  for (const auto& v : obs.views) {
    if (v.authority == ViewObservation::Authority::kPoints && !v.points.empty()) {
      out.push_back(v.points);
      continue;
    }
    if (!v.sym) throw Error(ErrorCode::kShape, "view carries no observation");
    if (v.sym->order() != 2) {
      throw Error(ErrorCode::kShape,
                  "point lists can only be recovered from order-2 tensors");
    }
    const auto [x, y] = split_rank2(*v.sym);
    out.push_back({ImagePoint(x), ImagePoint(y)});
  }
  return out;
}

SymConfig truth_tensor(const Scene& scene) {
  PointList pts(scene.world_points.begin(), scene.world_points.end());
  return config_to_sym(pts);
}

}  // namespace utri
