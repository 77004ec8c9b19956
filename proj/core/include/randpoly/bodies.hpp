#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "randpoly/predicates.hpp"
#include "randpoly/types.hpp"

namespace randpoly {

/// Volume of the d-dimensional unit Euclidean ball, pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int dim);

/// Invertible affine map x -> linear * x + offset.
class AffineMap {
 public:
  AffineMap(Matrix linear, Vector offset);

  static AffineMap identity(int dim);
  static AffineMap scaling(int dim, double factor);

  int dim() const noexcept { return static_cast<int>(offset_.size()); }
  const Matrix& linear() const noexcept { return linear_; }
  const Vector& offset() const noexcept { return offset_; }
  double determinant() const noexcept { return det_; }

  Point apply(const Point& x) const { return linear_ * x + offset_; }
  PointCloud apply(const PointCloud& points) const;
  AffineMap inverse() const;
  /// (*this) o other
  AffineMap compose(const AffineMap& other) const;

 private:
  Matrix linear_;
  Vector offset_;
  double det_ = 0.0;
};

struct Ball {
  Point center;
  double radius = 0.0;
};

/// {x : (x - c)^T A (x - c) <= 1} with A positive definite.
struct Ellipsoid {
  Point center;
  Matrix shape;
};

/// Axis-aligned box [lower, upper].
struct Box {
  Vector lower;
  Vector upper;

  double volume() const { return (upper - lower).prod(); }
  bool contains(const Point& p) const {
    return (p.array() >= lower.array()).all() && (p.array() <= upper.array()).all();
  }
};

/// Outward facet of a polytope: floating-point (unit normal, offset) for
/// geometry, plus an exact hyperplane through d vertices for membership.
struct PolytopeFacet {
  Vector normal;
  double offset = 0.0;
  predicates::Hyperplane plane;
};

namespace detail {
struct PolytopeData {
  PointCloud vertices;
  std::vector<PolytopeFacet> facets;
  double volume = 0.0;
};
}  // namespace detail

/// Convex hull of a finite point set, stored as its extreme points in
/// lexicographic order together with the facets found by the hull.
class VPolytope {
 public:
  /// Drops non-extreme points; throws kDegenerateBody for measure-zero input.
  explicit VPolytope(const PointCloud& points);

  int dim() const noexcept { return data_->vertices.dim(); }
  const PointCloud& vertices() const noexcept { return data_->vertices; }
  const std::vector<PolytopeFacet>& facets() const noexcept { return data_->facets; }
  double volume() const noexcept { return data_->volume; }

 private:
  std::shared_ptr<const detail::PolytopeData> data_;
};

struct Halfspace {
  Vector normal;
  double offset = 0.0;  // normal . x <= offset
};

/// Bounded intersection of halfspaces. Vertices are enumerated at
/// construction (d <= 6) so volume and support reduce to the V-form.
class HPolytope {
 public:
  explicit HPolytope(std::vector<Halfspace> halfspaces);

  int dim() const noexcept { return static_cast<int>(halfspaces_.front().normal.size()); }
  const std::vector<Halfspace>& halfspaces() const noexcept { return halfspaces_; }
  const VPolytope& vertex_form() const noexcept { return *vertex_form_; }

 private:
  std::vector<Halfspace> halfspaces_;
  std::shared_ptr<const VPolytope> vertex_form_;
};

/// A convex body K: compact, convex, positive volume. Immutable.
class ConvexBody {
 public:
  using Variant = std::variant<Ball, Ellipsoid, VPolytope, HPolytope>;

  static ConvexBody ball(Point center, double radius);
  static ConvexBody ellipsoid(Point center, Matrix shape);
  static ConvexBody vpolytope(const PointCloud& points);
  static ConvexBody hpolytope(std::vector<Halfspace> halfspaces);

  int dim() const noexcept { return dim_; }
  const Variant& variant() const noexcept { return body_; }
  std::string kind() const;

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&body_);
  }

 private:
  ConvexBody(Variant body, int dim) : body_(std::move(body)), dim_(dim) {}

  Variant body_;
  int dim_ = 0;
};

bool contains(const ConvexBody& body, const Point& p);
bool contains(const ConvexBody& body, std::span<const double> p);

/// h_K(u) = sup_{x in K} u . x for a unit vector u.
double support(const ConvexBody& body, const Vector& u);

double volume(const ConvexBody& body);

/// Image T(K) in the same representation family; a ball stays a ball only
/// when T is a similarity.
ConvexBody affine_image(const AffineMap& map, const ConvexBody& body);

Box bounding_box(const ConvexBody& body);

/// Points of the body that determine its support function: polytope
/// vertices; empty for smooth bodies.
PointCloud vertex_points(const ConvexBody& body);

/// Builtin bodies: disc, ball3, square, cube3, triangle, simplex3,
/// ellipse(a,b), and ball<d>/cube<d>/simplex<d> for 2 <= d <= 6.
ConvexBody builtin_body(const std::string& name);

/// [lo, hi]^d as a V-polytope.
ConvexBody cube_body(int dim, double lo = 0.0, double hi = 1.0);
/// conv{0, e_1, ..., e_d}.
ConvexBody standard_simplex(int dim);

}  // namespace randpoly
