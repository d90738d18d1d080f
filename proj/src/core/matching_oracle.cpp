#include "utri/matching_oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

namespace utri {

std::vector<Matching> enumerate_matchings(int n, int m, std::size_t budget) {
  if (n < 2 || m < 1) {
    throw Error(ErrorCode::kShape, "matchings need n >= 2 views and m >= 1 points");
  }
  double count = 1.0;
  double factorial = 1.0;
  for (int k = 2; k <= m; ++k) factorial *= k;
  for (int v = 1; v < n; ++v) count *= factorial;
  if (count > static_cast<double>(budget)) {
    throw Error(ErrorCode::kBudgetExceeded,
                std::to_string(static_cast<long double>(count)) +
                    " matchings exceed the budget of " + std::to_string(budget));
  }
  std::vector<int> identity(static_cast<std::size_t>(m));
  std::iota(identity.begin(), identity.end(), 0);
  Matching current;
  current.assignment.assign(static_cast<std::size_t>(n - 1), identity);

  std::vector<Matching> out;
  out.reserve(static_cast<std::size_t>(count));
  for (;;) {
    out.push_back(current);
    // Odometer with the last view varying fastest.
    int v = n - 2;
    while (v >= 0) {
      auto& perm = current.assignment[static_cast<std::size_t>(v)];
      if (std::next_permutation(perm.begin(), perm.end())) break;
      // next_permutation wrapped around to the identity.
      --v;
    }
    if (v < 0) break;
  }
  return out;
}

bool same_configuration(const WorldConfiguration& a, const WorldConfiguration& b,
                        double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& p : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && chordal_distance(p, b[j]) < tol) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

namespace {

void check_observations(const CameraRig& rig, const Observations& obs) {
  if (obs.size() != rig.size() || obs.size() < 2) {
    throw Error(ErrorCode::kShape, "one observation list per camera, n >= 2");
  }
  for (const auto& view : obs) {
    if (view.size() != obs[0].size() || view.empty()) {
      throw Error(ErrorCode::kShape, "every view must observe the same m >= 1 points");
    }
  }
}

}  // namespace

OracleResult oracle_triangulate(const CameraRig& rig, const Observations& obs,
                                const OracleOptions& opts) {
  check_observations(rig, obs);
  const int n = static_cast<int>(obs.size());
  const int m = static_cast<int>(obs[0].size());
  const std::vector<Matching> matchings = enumerate_matchings(n, m, opts.budget);

  OracleResult result;
  result.matchings_evaluated = matchings.size();
  std::vector<ImagePoint> tuple(static_cast<std::size_t>(n));
  for (std::size_t idx = 0; idx < matchings.size(); ++idx) {
    const Matching& matching = matchings[idx];
    OracleSolution sol{idx, matching, {}, 0.0};
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      for (int v = 0; v < n; ++v) {
        tuple[static_cast<std::size_t>(v)] =
            obs[static_cast<std::size_t>(v)]
               [static_cast<std::size_t>(matching.point_in_view(static_cast<std::size_t>(v), i))];
      }
      try {
        const LabeledTriangulation t =
            labeled_triangulate(rig, tuple, opts.tol_rank, opts.tol_residual);
        sol.residual = std::max(sol.residual, t.residual);
        sol.configuration.push_back(t.point);
        ok = !t.off_variety;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kAmbiguousTriangulation) throw;
        ++result.degenerate_matchings;
        ok = false;
      }
    }
    if (!ok) continue;
    result.surviving.push_back(sol);
    const bool seen = std::any_of(
        result.configurations.begin(), result.configurations.end(),
        [&](const OracleSolution& s) {
          return same_configuration(s.configuration, sol.configuration,
                                    opts.cluster_tol);
        });
    if (!seen) result.configurations.push_back(std::move(sol));
  }
  if (result.surviving.empty()) {
    throw Error(ErrorCode::kOffVariety,
                "no correspondence triangulates: observations are off the "
                "unlabeled multiview variety");
  }
  return result;
}

LineArrangement intersection_degrees(const CameraRig& rig,
                                     const Observations& obs, double tol,
                                     double cluster_tol) {
  check_observations(rig, obs);
  LineArrangement arr;
  for (std::size_t v = 0; v < obs.size(); ++v) {
    for (std::size_t i = 0; i < obs[v].size(); ++i) {
      arr.lines.push_back(TaggedLine{static_cast<int>(v), static_cast<int>(i),
                                     back_projected_line(rig[v], obs[v][i])});
    }
  }
  auto near_focal = [&](const WorldPoint& p) {
    return std::any_of(rig.cameras().begin(), rig.cameras().end(),
                       [&](const Camera& c) {
                         return chordal_distance(p, c.focal()) < cluster_tol;
                       });
  };
  for (std::size_t a = 0; a < arr.lines.size(); ++a) {
    for (std::size_t b = a + 1; b < arr.lines.size(); ++b) {
      // Lines of one view only meet at its focal point.
      if (arr.lines[a].view == arr.lines[b].view) continue;
      std::optional<WorldPoint> p;
      try {
        p = lines_meet(arr.lines[a].line, arr.lines[b].line, tol);
      } catch (const Error&) {
        continue;  // identical lines: both pass through the two focal points
      }
      if (!p || near_focal(*p)) continue;
      auto it = std::find_if(arr.clusters.begin(), arr.clusters.end(),
                             [&](const LineCluster& c) {
                               return chordal_distance(c.point, *p) < cluster_tol;
                             });
      if (it == arr.clusters.end()) {
        arr.clusters.push_back(LineCluster{*p, {}});
        it = std::prev(arr.clusters.end());
      }
      it->lines.push_back(static_cast<int>(a));
      it->lines.push_back(static_cast<int>(b));
    }
  }
  for (auto& c : arr.clusters) {
    std::sort(c.lines.begin(), c.lines.end());
    c.lines.erase(std::unique(c.lines.begin(), c.lines.end()), c.lines.end());
  }
  return arr;
}

std::vector<WorldConfiguration> cover_solutions(const LineArrangement& arrangement,
                                                int n, int m) {
  std::vector<int> candidates;
  for (std::size_t c = 0; c < arrangement.clusters.size(); ++c) {
    if (arrangement.clusters[c].degree() >= n) candidates.push_back(static_cast<int>(c));
  }
  if (candidates.size() > 20) {
    throw Error(ErrorCode::kBudgetExceeded,
                std::to_string(candidates.size()) +
                    " candidate clusters exceed the exact cover limit of 20");
  }
  const std::size_t line_count = arrangement.lines.size();
  std::vector<std::vector<int>> by_line(line_count);
  for (int c : candidates) {
    for (int l : arrangement.clusters[static_cast<std::size_t>(c)].lines) {
      by_line[static_cast<std::size_t>(l)].push_back(c);
    }
  }

  std::vector<WorldConfiguration> covers;
  std::vector<bool> used(line_count, false);
  std::vector<int> chosen;
  std::function<void()> search = [&]() {
    const auto first = std::find(used.begin(), used.end(), false);
    if (first == used.end()) {
      if (static_cast<int>(chosen.size()) == m) {
        WorldConfiguration config;
        for (int c : chosen) config.push_back(arrangement.clusters[static_cast<std::size_t>(c)].point);
        covers.push_back(std::move(config));
      }
      return;
    }
    if (static_cast<int>(chosen.size()) >= m) return;
    // The cluster covering the first uncovered line is fixed at each level,
    // so every cover is produced once.
    const auto line = static_cast<std::size_t>(first - used.begin());
    for (int c : by_line[line]) {
      const auto& lines = arrangement.clusters[static_cast<std::size_t>(c)].lines;
      const bool free = std::none_of(lines.begin(), lines.end(), [&](int l) {
        return used[static_cast<std::size_t>(l)];
      });
      if (!free) continue;
      for (int l : lines) used[static_cast<std::size_t>(l)] = true;
      chosen.push_back(c);
      search();
      chosen.pop_back();
      for (int l : lines) used[static_cast<std::size_t>(l)] = false;
    }
  };
  if (line_count > 0) search();
  return covers;
}

AmbiguityDiagnosis two_view_ambiguity_check(const CameraRig& rig,
                                            const ImagePoint& u1,
                                            const ImagePoint& v1,
                                            const ImagePoint& u2,
                                            const ImagePoint& v2, double tol) {
  if (rig.size() != 2) throw Error(ErrorCode::kShape, "two views required");
  const Eigen::Matrix3d f = fundamental_matrix(rig, 0, 1).f;
  const ImagePoint nu1 = normalize(u1), nv1 = normalize(v1);
  const ImagePoint nu2 = normalize(u2), nv2 = normalize(v2);
  const double a = nu2.dot(f * nu1);
  const double b = nv2.dot(f * nv1);
  const double c = nv2.dot(f * nu1);
  const double d = nu2.dot(f * nv1);

  AmbiguityDiagnosis diag;
  diag.on_variety_residual = std::min(std::max(std::abs(a), std::abs(b)),
                                      std::max(std::abs(c), std::abs(d)));
  diag.on_variety = diag.on_variety_residual < tol;
  const ImagePoint e12 = epipole(rig, 0, 1);
  const ImagePoint e21 = epipole(rig, 1, 0);
  diag.det_view1 = collinear_det(e12, nu1, nv1);
  diag.det_view2 = collinear_det(e21, nu2, nv2);
  diag.distinct_from_epipoles =
      chordal_distance(nu1, e12) > tol && chordal_distance(nv1, e12) > tol &&
      chordal_distance(nu2, e21) > tol && chordal_distance(nv2, e21) > tol;
  diag.ambiguous = diag.on_variety && std::abs(diag.det_view1) < tol &&
                   std::abs(diag.det_view2) < tol;
  if (diag.on_variety && diag.distinct_from_epipoles) {
    const Observations obs{{nu1, nv1}, {nu2, nv2}};
    try {
      for (auto& s : oracle_triangulate(rig, obs).configurations) {
        diag.reconstructions.push_back(std::move(s.configuration));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kOffVariety) throw;
    }
  }
  return diag;
}

bool baseline_coplanarity(const CameraRig& rig,
                          const std::vector<WorldPoint>& points, std::size_t i,
                          std::size_t j, double tol) {
  const WorldPoint& fi = rig[i].focal();
  const WorldPoint& fj = rig[j].focal();
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      if (std::abs(coplanar_det(points[a], points[b], fi, fj)) < tol) return true;
    }
  }
  return false;
}

}  // namespace utri
