#include "randpoly/body_io.hpp"

#include <fstream>

#include "randpoly/error.hpp"

namespace randpoly {
namespace {

using nlohmann::json;

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from(const json& j, int dim, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    fail(ErrorCode::kParse, std::string(what) + " must be an array of " + std::to_string(dim) + " numbers");
  }
  Vector v(dim);
  for (int i = 0; i < dim; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) fail(ErrorCode::kParse, std::string(what) + " entries must be numbers");
    v[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

const json& field(const json& doc, const char* name) {
  if (!doc.contains(name)) fail(ErrorCode::kParse, std::string("body spec is missing \"") + name + "\"");
  return doc.at(name);
}

}  // namespace

json body_to_json(const ConvexBody& body) {
  json doc;
  doc["dim"] = body.dim();
  doc["type"] = body.kind();
  if (const auto* b = body.as<Ball>()) {
    doc["center"] = vector_json(b->center);
    doc["radius"] = b->radius;
  } else if (const auto* e = body.as<Ellipsoid>()) {
    doc["center"] = vector_json(e->center);
    json rows = json::array();
    for (Eigen::Index r = 0; r < e->shape.rows(); ++r) rows.push_back(vector_json(e->shape.row(r).transpose()));
    doc["shape"] = rows;
  } else if (const auto* v = body.as<VPolytope>()) {
    json verts = json::array();
    for (std::size_t i = 0; i < v->vertices().size(); ++i) verts.push_back(vector_json(v->vertices().point(i)));
    doc["vertices"] = verts;
  } else if (const auto* h = body.as<HPolytope>()) {
    json hs = json::array();
    for (const Halfspace& s : h->halfspaces()) hs.push_back({{"normal", vector_json(s.normal)}, {"offset", s.offset}});
    doc["halfspaces"] = hs;
  }
  return doc;
}

ConvexBody body_from_json(const json& doc) {
  if (!doc.is_object()) fail(ErrorCode::kParse, "body spec must be a JSON object");
  const json& dim_field = field(doc, "dim");
  if (!dim_field.is_number_integer()) fail(ErrorCode::kParse, "\"dim\" must be an integer");
  const int dim = dim_field.get<int>();
  if (dim < 2) fail(ErrorCode::kParse, "\"dim\" must be at least 2");
  const json& type_field = field(doc, "type");
  if (!type_field.is_string()) fail(ErrorCode::kParse, "\"type\" must be a string");
  const std::string type = type_field.get<std::string>();

  if (type == "ball") {
    const json& r = field(doc, "radius");
    if (!r.is_number()) fail(ErrorCode::kParse, "\"radius\" must be a number");
    return ConvexBody::ball(vector_from(field(doc, "center"), dim, "center"), r.get<double>());
  }
  if (type == "ellipsoid") {
    const json& rows = field(doc, "shape");
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim) fail(ErrorCode::kParse, "\"shape\" must have d rows");
    Matrix shape(dim, dim);
    for (int r = 0; r < dim; ++r) shape.row(r) = vector_from(rows[static_cast<std::size_t>(r)], dim, "shape row").transpose();
    return ConvexBody::ellipsoid(vector_from(field(doc, "center"), dim, "center"), shape);
  }
  if (type == "vpolytope") {
    const json& verts = field(doc, "vertices");
    if (!verts.is_array()) fail(ErrorCode::kParse, "\"vertices\" must be an array");
    PointCloud pts(dim);
    for (const json& v : verts) pts.push_back(vector_from(v, dim, "vertex"));
    return ConvexBody::vpolytope(pts);
  }
  if (type == "hpolytope") {
    const json& hs = field(doc, "halfspaces");
    if (!hs.is_array()) fail(ErrorCode::kParse, "\"halfspaces\" must be an array");
    std::vector<Halfspace> out;
    for (const json& h : hs) {
      const json& off = field(h, "offset");
      if (!off.is_number()) fail(ErrorCode::kParse, "halfspace \"offset\" must be a number");
      out.push_back({vector_from(field(h, "normal"), dim, "normal"), off.get<double>()});
    }
    return ConvexBody::hpolytope(std::move(out));
  }
  fail(ErrorCode::kParse, "unknown body type \"" + type + "\"");
}

ConvexBody load_body(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot open body file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, "invalid JSON in " + path.string() + ": " + e.what());
  }
  return body_from_json(doc);
}

void save_body(const ConvexBody& body, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kInvalidArgument, "cannot write body file " + path.string());
  out << body_to_json(body).dump(2) << '\n';
}

ConvexBody resolve_body(const std::string& spec) {
  if (spec.size() > 5 && spec.ends_with(".json")) return load_body(spec);
  if (std::filesystem::exists(spec) && std::filesystem::is_regular_file(spec)) return load_body(spec);
  return builtin_body(spec);
}

}  // namespace randpoly
