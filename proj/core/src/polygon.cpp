#include "randpoly/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "randpoly/error.hpp"

namespace randpoly::polygon {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double normal_angle(const Vec2& from, const Vec2& to) {
  const Vec2 e = to - from;
  double a = std::atan2(-e.x(), e.y());  // outward normal of a ccw edge
  if (a < 0.0) a += kTwoPi;
  return a;
}

// Strict corners of a ccw convex polygon: duplicates and points in the
// middle of an edge never own an arc of the normal fan.
Polygon corners(const Polygon& p) {
  Polygon distinct;
  for (const Vec2& v : p) {
    if (distinct.empty() || v != distinct.back()) distinct.push_back(v);
  }
  while (distinct.size() > 1 && distinct.front() == distinct.back()) distinct.pop_back();
  Polygon out;
  const std::size_t n = distinct.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& prev = distinct[(i + n - 1) % n];
    const Vec2& next = distinct[(i + 1) % n];
    if (cross(distinct[i] - prev, next - distinct[i]) != 0.0) out.push_back(distinct[i]);
  }
  return out;
}

NormalFan fan_of_corners(const Polygon& c) {
  const std::size_t n = c.size();
  std::vector<std::pair<double, std::size_t>> arcs;
  arcs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) arcs.emplace_back(normal_angle(c[(i + n - 1) % n], c[i]), i);
  std::sort(arcs.begin(), arcs.end());
  NormalFan fan;
  for (const auto& [a, i] : arcs) {
    fan.start.push_back(a);
    fan.corner.push_back(c[i]);
  }
  return fan;
}

Vec2 direction(double t) { return {std::cos(t), std::sin(t)}; }

// max |v . u(t)| for t in [a, b], b - a < pi.
double max_on_arc(const Vec2& v, double a, double b) {
  double best = std::max(std::abs(v.dot(direction(a))), std::abs(v.dot(direction(b))));
  const double norm = v.norm();
  if (norm == 0.0) return best;
  double phi = std::atan2(v.y(), v.x());
  for (int k = 0; k < 2; ++k, phi += std::numbers::pi) {
    double t = std::fmod(phi - a, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t <= b - a) best = norm;
  }
  return best;
}

Vec2 edge_intersection(const Vec2& p, const Vec2& q, const Vec2& a, const Vec2& b) {
  const Vec2 r = q - p;
  const Vec2 s = b - a;
  const double denom = cross(r, s);
  const double t = cross(a - p, s) / denom;
  return p + t * r;
}

}  // namespace

double signed_area(const Polygon& p) {
  double s = 0.0;
  for (std::size_t i = 0, n = p.size(); i < n; ++i) s += cross(p[i], p[(i + 1) % n]);
  return 0.5 * s;
}

double area(const Polygon& p) { return std::abs(signed_area(p)); }

double perimeter(const Polygon& p) {
  double s = 0.0;
  for (std::size_t i = 0, n = p.size(); i < n; ++i) s += (p[(i + 1) % n] - p[i]).norm();
  return s;
}

bool is_convex(const Polygon& p) {
  const std::size_t n = p.size();
  if (n < 3) return false;
  int sign = 0;
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e1 = p[(i + 1) % n] - p[i];
    const Vec2 e2 = p[(i + 2) % n] - p[(i + 1) % n];
    if (e1.squaredNorm() == 0.0 || e2.squaredNorm() == 0.0) continue;
    const double c = cross(e1, e2);
    const int s = (c > 0.0) - (c < 0.0);
    if (s != 0) {
      if (sign != 0 && s != sign) return false;
      sign = s;
    }
    turning += std::atan2(c, e1.dot(e2));
  }
  // A star-shaped but self-overlapping ring winds more than once.
  return sign != 0 && std::abs(std::abs(turning) - kTwoPi) < 1e-6;
}

Polygon canonical(const Polygon& p) {
  if (!is_convex(p)) fail(ErrorCode::kNonConvex, "polygon is not convex");
  Polygon out = p;
  if (signed_area(out) < 0.0) std::reverse(out.begin(), out.end());
  return out;
}

Polygon from_body(const ConvexBody& body) {
  if (body.dim() != 2) fail(ErrorCode::kDimensionMismatch, "polygon needs a 2D body");
  const PointCloud verts = vertex_points(body);
  if (verts.empty()) fail(ErrorCode::kInvalidArgument, "body is not a polygon");
  Vec2 centroid = Vec2::Zero();
  Polygon out;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    out.emplace_back(verts[i][0], verts[i][1]);
    centroid += out.back();
  }
  centroid /= static_cast<double>(out.size());
  std::sort(out.begin(), out.end(), [&](const Vec2& a, const Vec2& b) {
    return std::atan2(a.y() - centroid.y(), a.x() - centroid.x()) <
           std::atan2(b.y() - centroid.y(), b.x() - centroid.x());
  });
  return out;
}

ConvexBody to_body(const Polygon& p) {
  PointCloud cloud(2);
  for (const Vec2& v : p) cloud.push_back(Point(v));
  return ConvexBody::vpolytope(cloud);
}

double support(const Polygon& p, const Vec2& u) {
  double best = -INFINITY;
  for (const Vec2& v : p) best = std::max(best, v.dot(u));
  return best;
}

Polygon hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;
  Polygon out(2 * points.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    while (k >= 2 && cross(out[k - 1] - out[k - 2], points[i] - out[k - 2]) <= 0.0) --k;
    out[k++] = points[i];
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(out[k - 1] - out[k - 2], points[i] - out[k - 2]) <= 0.0) --k;
    out[k++] = points[i];
  }
  out.resize(k - 1);
  return out;
}

Polygon intersect(const Polygon& p, const Polygon& q) {
  Polygon out = p;
  const std::size_t m = q.size();
  for (std::size_t j = 0; j < m && !out.empty(); ++j) {
    const Vec2& a = q[j];
    const Vec2& b = q[(j + 1) % m];
    const auto inside = [&](const Vec2& x) { return cross(b - a, x - a) >= 0.0; };
    Polygon in = std::move(out);
    out.clear();
    for (std::size_t i = 0, n = in.size(); i < n; ++i) {
      const Vec2& cur = in[i];
      const Vec2& nxt = in[(i + 1) % n];
      const bool cur_in = inside(cur);
      const bool nxt_in = inside(nxt);
      if (cur_in) out.push_back(cur);
      if (cur_in != nxt_in) out.push_back(edge_intersection(cur, nxt, a, b));
    }
  }
  return out;
}

NormalFan normal_fan(const Polygon& p) { return fan_of_corners(corners(canonical(p))); }

double hausdorff(const Polygon& p, const Polygon& q) { return hausdorff(normal_fan(p), normal_fan(q)); }

double hausdorff(const NormalFan& fp, const NormalFan& fq) {
  const std::size_t np = fp.start.size();
  const std::size_t nq = fq.start.size();
  if (np == 0 || nq == 0) fail(ErrorCode::kInvalidArgument, "empty normal fan");
  std::size_t i = 0;
  std::size_t j = 0;
  Vec2 cp = fp.corner.back();
  Vec2 cq = fq.corner.back();
  double a = 0.0;
  double best = 0.0;
  for (;;) {
    while (i < np && fp.start[i] <= a) cp = fp.corner[i++];
    while (j < nq && fq.start[j] <= a) cq = fq.corner[j++];
    const double b = std::min(i < np ? fp.start[i] : kTwoPi, j < nq ? fq.start[j] : kTwoPi);
    best = std::max(best, max_on_arc(cp - cq, a, b));
    if (b >= kTwoPi) break;
    a = b;
  }
  return best;
}

}  // namespace randpoly::polygon
