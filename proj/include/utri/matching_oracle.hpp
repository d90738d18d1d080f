#pragma once

#include <cstddef>
#include <vector>

#include "utri/camera.hpp"

namespace utri {

inline constexpr std::size_t kDefaultBudget = 1'000'000;
inline constexpr double kClusterTol = 1e-6;

/// A correspondence across views. View 0 is fixed to the identity;
/// assignment[j - 1][i] is the index in view j of the point matched to point i
/// of view 0.
struct Matching {
  std::vector<std::vector<int>> assignment;

  int point_in_view(std::size_t view, int i) const {
    return view == 0 ? i : assignment[view - 1][static_cast<std::size_t>(i)];
  }
};

/// Unlabeled image points, one list of m points per view.
using Observations = std::vector<std::vector<ImagePoint>>;
/// An unordered set of world points.
using WorldConfiguration = std::vector<WorldPoint>;

/// All (m!)^(n-1) matchings in lexicographic order. Throws kBudgetExceeded
/// when the count exceeds the budget.
std::vector<Matching> enumerate_matchings(int n, int m,
                                          std::size_t budget = kDefaultBudget);

/// Same unordered configuration: a bijection with chordal distance below tol.
bool same_configuration(const WorldConfiguration& a, const WorldConfiguration& b,
                        double tol = kClusterTol);

struct OracleOptions {
  double tol_rank = kRankTol;
  double tol_residual = 1e-6;
  double cluster_tol = kClusterTol;
  std::size_t budget = kDefaultBudget;
};

struct OracleSolution {
  std::size_t matching_index = 0;
  Matching matching;
  WorldConfiguration configuration;
  /// Largest labeled triangulation residual over the m corresponded tuples.
  double residual = 0.0;
};

struct OracleResult {
  /// Every matching whose tuples all triangulate, ordered by matching index.
  std::vector<OracleSolution> surviving;
  /// Surviving configurations with duplicates removed (first occurrence kept).
  std::vector<OracleSolution> configurations;
  std::size_t matchings_evaluated = 0;
  /// Matchings skipped because a tuple had an ambiguous labeled triangulation.
  std::size_t degenerate_matchings = 0;
};

/// Labeled triangulation of every matching. Throws kOffVariety when no
/// matching survives.
OracleResult oracle_triangulate(const CameraRig& rig, const Observations& obs,
                                const OracleOptions& opts = {});

struct TaggedLine {
  int view = 0;
  int point = 0;
  PluckerLine line;
};

struct LineCluster {
  WorldPoint point;
  /// Indices into LineArrangement::lines, sorted and unique.
  std::vector<int> lines;

  int degree() const { return static_cast<int>(lines.size()); }
};

struct LineArrangement {
  std::vector<TaggedLine> lines;
  std::vector<LineCluster> clusters;
};

/// Back-projected lines of all observations and the clusters of their pairwise
/// intersections away from the focal points.
LineArrangement intersection_degrees(const CameraRig& rig,
                                     const Observations& obs,
                                     double tol = kIncidenceTol,
                                     double cluster_tol = kClusterTol);

/// Every choice of m clusters of degree >= n that uses each line exactly
/// once. Throws kBudgetExceeded beyond 20 candidate clusters.
std::vector<WorldConfiguration> cover_solutions(const LineArrangement& arrangement,
                                                int n, int m);

struct AmbiguityDiagnosis {
  /// min(max(|a|,|b|), max(|c|,|d|)) for the two labelings.
  double on_variety_residual = 0.0;
  bool on_variety = false;
  /// |e12, u1, v1| and |e21, u2, v2| on normalized representatives.
  double det_view1 = 0.0;
  double det_view2 = 0.0;
  bool distinct_from_epipoles = true;
  bool ambiguous = false;
  std::vector<WorldConfiguration> reconstructions;
};

AmbiguityDiagnosis two_view_ambiguity_check(const CameraRig& rig,
                                            const ImagePoint& u1,
                                            const ImagePoint& v1,
                                            const ImagePoint& u2,
                                            const ImagePoint& v2,
                                            double tol = kIncidenceTol);

/// Some pair of world points is coplanar with focal points i and j.
bool baseline_coplanarity(const CameraRig& rig,
                          const std::vector<WorldPoint>& points, std::size_t i,
                          std::size_t j, double tol = kIncidenceTol);

}  // namespace utri
