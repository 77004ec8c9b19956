#pragma once

#include <vector>

#include <Eigen/Dense>

#include "randpoly/bodies.hpp"

namespace randpoly::polygon {

using Vec2 = Eigen::Vector2d;
/// Convex polygon as its vertices in counterclockwise order.
using Polygon = std::vector<Vec2>;

double signed_area(const Polygon& p);
double area(const Polygon& p);
double perimeter(const Polygon& p);

/// True for a convex polygon in either orientation with at least three
/// vertices; collinear consecutive vertices are allowed.
bool is_convex(const Polygon& p);

/// Counterclockwise copy of a convex polygon; throws kNonConvex otherwise.
Polygon canonical(const Polygon& p);

/// Boundary of a 2D polytope body, counterclockwise.
Polygon from_body(const ConvexBody& body);
ConvexBody to_body(const Polygon& p);

double support(const Polygon& p, const Vec2& u);

/// Counterclockwise hull of a planar point set by monotone chain, in
/// floating point; meant for generic random input. Collinear points are
/// dropped.
Polygon hull(std::vector<Vec2> points);

/// P ∩ Q for convex counterclockwise polygons by Sutherland-Hodgman
/// clipping; may come back with fewer than three vertices.
Polygon intersect(const Polygon& p, const Polygon& q);

/// Outer normal fan: corner k supports every direction with angle in
/// [start[k], start[k + 1]), cyclically, with start sorted in [0, 2 pi).
struct NormalFan {
  std::vector<double> start;
  std::vector<Vec2> corner;
};

/// Throws kNonConvex for nonconvex input.
NormalFan normal_fan(const Polygon& p);

/// Exact Hausdorff distance sup_u |h_P(u) - h_Q(u)| for convex polygons,
/// evaluated on the merged normal fans of P and Q.
double hausdorff(const Polygon& p, const Polygon& q);
double hausdorff(const NormalFan& p, const NormalFan& q);

}  // namespace randpoly::polygon
