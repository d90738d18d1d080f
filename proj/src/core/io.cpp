#include "utri/io.hpp"

#include <string>

namespace utri::io {

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::kParse, "invalid document: " + what);
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    schema_error(std::string("missing key '") + key + "'");
  }
  return j.at(key);
}

double number(const json& j) {
  if (!j.is_number()) schema_error("expected a number");
  return j.get<double>();
}

}  // namespace

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

json point_to_json(const Eigen::VectorXd& p) {
  const Eigen::VectorXd n = normalize(p);
  json a = json::array();
  for (Eigen::Index i = 0; i < n.size(); ++i) a.push_back(n(i));
  return a;
}

Eigen::VectorXd point_from_json(const json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    schema_error("expected an array of " + std::to_string(dim) + " numbers");
  }
  Eigen::VectorXd p(dim);
  for (int i = 0; i < dim; ++i) p(i) = number(j[static_cast<std::size_t>(i)]);
  return p;
}

json line_to_json(const PluckerLine& line) {
  return point_to_json(line.coords);
}

json camera_to_json(const Camera& camera) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(camera.matrix()(r, c));
    rows.push_back(row);
  }
  return json{{"matrix", rows}};
}

Camera camera_from_json(const json& j) {
  const json& rows = require(j, "matrix");
  if (!rows.is_array() || rows.size() != 3) schema_error("camera matrix must be 3x4");
  Matrix34 a;
  for (int r = 0; r < 3; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 4) schema_error("camera matrix must be 3x4");
    for (int c = 0; c < 4; ++c) a(r, c) = number(row[static_cast<std::size_t>(c)]);
  }
  return Camera(a);
}

json rig_to_json(const CameraRig& rig) {
  json a = json::array();
  for (const auto& c : rig.cameras()) a.push_back(camera_to_json(c));
  return a;
}

CameraRig rig_from_json(const json& j) {
  if (!j.is_array()) schema_error("cameras must be an array");
  std::vector<Camera> cams;
  for (const auto& c : j) cams.push_back(camera_from_json(c));
  return CameraRig(std::move(cams));
}

json sym_to_json(const SymConfig& s) {
  json entries = json::array();
  const Eigen::VectorXd e = normalize(s.entries());
  for (Eigen::Index i = 0; i < e.size(); ++i) entries.push_back(e(i));
  return json{{"order", s.order()}, {"dim", s.dim()}, {"entries", entries}};
}

SymConfig sym_from_json(const json& j) {
  const int order = require(j, "order").get<int>();
  const int dim = require(j, "dim").get<int>();
  const json& entries = require(j, "entries");
  if (!entries.is_array()) schema_error("entries must be an array");
  Eigen::VectorXd e(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    e(static_cast<Eigen::Index>(i)) = number(entries[i]);
  }
  return SymConfig(order, dim, std::move(e));
}

json scene_to_json(const Scene& scene) {
  json pts = json::array();
  for (const auto& x : scene.world_points) pts.push_back(point_to_json(x));
  return json{{"cameras", rig_to_json(scene.rig)},
              {"world_points", pts},
              {"seed", scene.seed},
              {"noise_sigma", scene.noise_sigma},
              {"family", scene_family_name(scene.family)}};
}

Scene scene_from_json(const json& j) {
  Scene s;
  s.rig = rig_from_json(require(j, "cameras"));
  if (s.rig.size() < 2) schema_error("a scene needs at least two cameras");
  if (j.contains("world_points")) {
    for (const auto& p : j.at("world_points")) {
      s.world_points.push_back(point_from_json(p, 4));
    }
  }
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("noise_sigma")) s.noise_sigma = number(j.at("noise_sigma"));
  if (j.contains("family")) s.family = parse_scene_family(j.at("family").get<std::string>());
  return s;
}

json observations_to_json(const ObservationSet& obs) {
  json views = json::array();
  for (const auto& v : obs.views) {
    json view = json::object();
    if (!v.points.empty()) {
      json pts = json::array();
      for (const auto& u : v.points) pts.push_back(point_to_json(u));
      view["points"] = pts;
    }
    if (v.sym) view["sym"] = sym_to_json(*v.sym);
    view["authoritative"] =
        v.authority == ViewObservation::Authority::kPoints ? "points" : "sym";
    views.push_back(view);
  }
  return json{{"m", obs.m}, {"views", views}};
}

ObservationSet observations_from_json(const json& j) {
  ObservationSet obs;
  obs.m = require(j, "m").get<int>();
  if (obs.m < 1) schema_error("m must be positive");
  const json& views = require(j, "views");
  if (!views.is_array() || views.size() < 2) schema_error("at least two views required");
  for (const auto& vj : views) {
    ViewObservation v;
    const bool has_points = vj.contains("points");
    const bool has_sym = vj.contains("sym");
    if (!has_points && !has_sym) schema_error("view without observation");
    if (has_points) {
      for (const auto& p : vj.at("points")) v.points.push_back(point_from_json(p, 3));
      if (static_cast<int>(v.points.size()) != obs.m) {
        schema_error("view point count differs from m");
      }
    }
    if (has_sym) {
      v.sym = sym_from_json(vj.at("sym"));
      if (v.sym->order() != obs.m || v.sym->dim() != 3) {
        schema_error("view tensor must have order m and dim 3");
      }
    }
    std::string authority = has_points ? "points" : "sym";
    if (vj.contains("authoritative")) authority = vj.at("authoritative").get<std::string>();
    if (authority == "points" && has_points) {
      v.authority = ViewObservation::Authority::kPoints;
    } else if (authority == "sym" && has_sym) {
      v.authority = ViewObservation::Authority::kSym;
    } else {
      schema_error("authoritative representation '" + authority + "' is missing");
    }
    obs.views.push_back(std::move(v));
  }
  return obs;
}

json configuration_to_json(const WorldConfiguration& c) {
  json a = json::array();
  for (const auto& x : c) a.push_back(point_to_json(x));
  return a;
}

json triangulation_to_json(const TriangulationResult& r) {
  json scales = json::array();
  for (Eigen::Index i = 0; i < r.scales.size(); ++i) scales.push_back(r.scales(i));
  json out{{"M_delta", sym_to_json(r.m_delta)},
           {"scales", scales},
           {"residual", r.residual},
           {"kernel_dim", r.kernel_dim},
           {"gap_ratio", r.gap_ratio},
           {"ambiguous", r.ambiguous}};
  if (r.points) {
    out["points"] = json::array({point_to_json(r.points->first),
                                 point_to_json(r.points->second)});
  } else {
    out["points"] = nullptr;
  }
  return out;
}

namespace {

json matching_to_json(const Matching& m) {
  json a = json::array();
  for (const auto& perm : m.assignment) a.push_back(perm);
  return a;
}

json solution_to_json(const OracleSolution& s) {
  return json{{"matching_index", s.matching_index},
              {"matching", matching_to_json(s.matching)},
              {"configuration", configuration_to_json(s.configuration)},
              {"residual", s.residual}};
}

}  // namespace

json oracle_to_json(const OracleResult& r) {
  json surviving = json::array();
  for (const auto& s : r.surviving) surviving.push_back(solution_to_json(s));
  json configs = json::array();
  for (const auto& s : r.configurations) configs.push_back(solution_to_json(s));
  return json{{"matchings_evaluated", r.matchings_evaluated},
              {"degenerate_matchings", r.degenerate_matchings},
              {"surviving_matchings", surviving.size()},
              {"configuration_count", configs.size()},
              {"surviving", surviving},
              {"configurations", configs}};
}

json arrangement_to_json(const LineArrangement& a) {
  json lines = json::array();
  for (const auto& l : a.lines) {
    lines.push_back(json{{"view", l.view}, {"point", l.point}, {"plucker", line_to_json(l.line)}});
  }
  json clusters = json::array();
  for (const auto& c : a.clusters) {
    clusters.push_back(json{{"point", point_to_json(c.point)},
                            {"degree", c.degree()},
                            {"lines", c.lines}});
  }
  return json{{"lines", lines}, {"clusters", clusters}};
}

json diagnosis_to_json(const AmbiguityDiagnosis& d) {
  json recon = json::array();
  for (const auto& c : d.reconstructions) recon.push_back(configuration_to_json(c));
  return json{{"on_variety", d.on_variety},
              {"on_variety_residual", d.on_variety_residual},
              {"collinear_det_view1", d.det_view1},
              {"collinear_det_view2", d.det_view2},
              {"distinct_from_epipoles", d.distinct_from_epipoles},
              {"ambiguous", d.ambiguous},
              {"reconstruction_count", d.reconstructions.size()},
              {"reconstructions", recon}};
}

json rank_profile_to_json(const RankProfile& p) {
  json checks = json::array();
  for (const auto& c : p.checks) {
    checks.push_back(json{{"name", c.name},
                          {"rank", c.rank},
                          {"expected", c.expected},
                          {"gap_ratio", c.gap_ratio},
                          {"passed", c.passed}});
  }
  return json{{"checks", checks},
              {"focal_kernel_distance", p.focal_kernel_distance},
              {"passed", p.passed}};
}

json pencil_to_json(const PencilReport& p) {
  json hist = json::object();
  for (const auto& [rank, count] : p.rank_histogram) hist[std::to_string(rank)] = count;
  return json{{"pairs_tested", p.pairs_tested},
              {"pairs_excluded", p.pairs_excluded},
              {"pairs_passed", p.pairs_passed},
              {"rank_histogram", hist},
              {"passed", p.passed}};
}

json error_to_json(const Error& e) {
  json out{{"code", error_code_name(e.code())}, {"message", e.what()}};
  if (e.kernel_dim() >= 0) out["kernel_dim"] = e.kernel_dim();
  out["ambiguous"] = e.code() == ErrorCode::kAmbiguousTriangulation;
  return json{{"error", out}};
}

}  // namespace utri::io
