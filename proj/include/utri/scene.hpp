#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "utri/matching_oracle.hpp"
#include "utri/sym_rep.hpp"

namespace utri {

enum class SceneFamily {
  kGeneric,
  /// All world points lie on a plane through the baseline of cameras 0 and 1.
  kBaselineCoplanar,
  /// The first world point lies on the baseline of cameras 0 and 1, so its
  /// images are the epipoles.
  kEpipolarDegenerate,
};

const char* scene_family_name(SceneFamily f);
SceneFamily parse_scene_family(const std::string& name);

struct Scene {
  CameraRig rig;
  std::vector<WorldPoint> world_points;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
  SceneFamily family = SceneFamily::kGeneric;
};

/// Deterministic in all arguments. Cameras come from random_rig; world points
/// have entries uniform in [-1, 1] unless the family prescribes a plane or a
/// line.
Scene generate_scene(int n, int m, std::uint64_t seed,
                     SceneFamily family = SceneFamily::kGeneric,
                     double noise_sigma = 0.0);

/// Unlabeled observations of one view. Generated observations carry both
/// representations; `authority` names the one the other was derived from.
struct ViewObservation {
  enum class Authority { kPoints, kSym };
  std::vector<ImagePoint> points;
  std::optional<SymConfig> sym;
  Authority authority = Authority::kPoints;
};

struct ObservationSet {
  int m = 0;
  std::vector<ViewObservation> views;
};

/// Per view: the normalized images of the world points, with Gaussian noise of
/// scale noise_sigma on the normalized coordinates, shuffled; plus their
/// symmetric tensor. Throws kUndefinedProjection for a point at a focal point.
ObservationSet project_scene(const Scene& scene);

/// Symmetric tensors of all views (derived from the point lists when absent).
std::vector<SymConfig> sym_observations(const ObservationSet& obs);

/// Point lists of all views. Views that only carry a tensor are split when
/// m = 2; otherwise kShape is thrown.
Observations point_observations(const ObservationSet& obs);

/// Symmetric tensor of the ground truth world configuration.
SymConfig truth_tensor(const Scene& scene);

}  // namespace utri
