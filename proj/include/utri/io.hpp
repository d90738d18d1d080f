#pragma once

#include <json.hpp>

#include "utri/algebra_checks.hpp"
#include "utri/scene.hpp"

namespace utri::io {

using json = nlohmann::json;

/// Projective points are written normalized.
json point_to_json(const Eigen::VectorXd& p);
Eigen::VectorXd point_from_json(const json& j, int dim);

/// Plücker coordinates (p01, p02, p03, p12, p13, p23), normalized.
json line_to_json(const PluckerLine& line);

/// {"matrix": [[...], [...], [...]]}, entries as stored.
json camera_to_json(const Camera& camera);
Camera camera_from_json(const json& j);
json rig_to_json(const CameraRig& rig);
CameraRig rig_from_json(const json& j);

/// {order, dim, entries}, entries normalized in sorted multi-index order.
json sym_to_json(const SymConfig& s);
SymConfig sym_from_json(const json& j);

json scene_to_json(const Scene& scene);
Scene scene_from_json(const json& j);

json observations_to_json(const ObservationSet& obs);
ObservationSet observations_from_json(const json& j);

json configuration_to_json(const WorldConfiguration& c);
json triangulation_to_json(const TriangulationResult& r);
json oracle_to_json(const OracleResult& r);
json arrangement_to_json(const LineArrangement& a);
json diagnosis_to_json(const AmbiguityDiagnosis& d);
json rank_profile_to_json(const RankProfile& p);
json pencil_to_json(const PencilReport& p);
json error_to_json(const Error& e);

/// Parses text, mapping syntax and schema errors to kParse.
json parse(const std::string& text);

}  // namespace utri::io
