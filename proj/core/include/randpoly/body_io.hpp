#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "randpoly/bodies.hpp"

namespace randpoly {

/// Body specification document:
///   {"dim": d, "type": "ball", "center": [...], "radius": r}
///   {"dim": d, "type": "ellipsoid", "center": [...], "shape": [[...], ...]}
///   {"dim": d, "type": "vpolytope", "vertices": [[...], ...]}
///   {"dim": d, "type": "hpolytope", "halfspaces": [{"normal": [...], "offset": b}, ...]}
/// Polytopes are written in canonical form (extreme points only, sorted), so
/// parse(write(K)) reproduces K bit for bit.
nlohmann::json body_to_json(const ConvexBody& body);
ConvexBody body_from_json(const nlohmann::json& doc);

ConvexBody load_body(const std::filesystem::path& path);
void save_body(const ConvexBody& body, const std::filesystem::path& path);

/// Builtin name or path to a JSON body file.
ConvexBody resolve_body(const std::string& spec);

}  // namespace randpoly
