#include "randpoly/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>
#include <string>

#include "randpoly/error.hpp"
#include "randpoly/hull.hpp"

namespace randpoly {
namespace {

void require_dim(int dim) {
  if (dim < 2) fail(ErrorCode::kInvalidArgument, "ambient dimension must be at least 2");
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

template <class Visitor>
auto visit_body(const ConvexBody& body, Visitor&& v) {
  return std::visit(std::forward<Visitor>(v), body.variant());
}

// Calls f(indices) for every k-subset of {0..n-1} in lexicographic order.
template <class F>
void for_each_subset(int n, int k, F&& f) {
  if (k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

PointCloud enumerate_vertices(const std::vector<Halfspace>& hs, int dim) {
  const int m = static_cast<int>(hs.size());
  double scale = 1.0;
  for (const Halfspace& h : hs) scale = std::max(scale, std::abs(h.offset) / h.normal.norm());

  // Recession cone {r : A r <= 0} must be trivial. If it is pointed and
  // nontrivial it has an extreme ray cut out by d-1 independent constraints.
  for_each_subset(m, dim - 1, [&](const std::vector<int>& sub) {
    Matrix a(dim - 1, dim);
    for (int i = 0; i < dim - 1; ++i) a.row(i) = hs[sub[i]].normal.transpose() / hs[sub[i]].normal.norm();
    Eigen::FullPivLU<Matrix> lu(a);
    lu.setThreshold(1e-12);
    if (lu.rank() != dim - 1) return;
    const Vector ray = lu.kernel().col(0).normalized();
    for (double sign : {1.0, -1.0}) {
      bool recedes = true;
      for (const Halfspace& h : hs) {
        if (sign * h.normal.dot(ray) > 1e-12 * h.normal.norm()) {
          recedes = false;
          break;
        }
      }
      if (recedes) fail(ErrorCode::kUnbounded, "H-polytope is unbounded (recession direction found)");
    }
  });

  std::vector<Point> found;
  for_each_subset(m, dim, [&](const std::vector<int>& sub) {
    Matrix a(dim, dim);
    Vector b(dim);
    for (int i = 0; i < dim; ++i) {
      a.row(i) = hs[sub[i]].normal.transpose();
      b[i] = hs[sub[i]].offset;
    }
    Eigen::FullPivLU<Matrix> lu(a);
    lu.setThreshold(1e-12);
    if (lu.rank() != dim) return;
    const Point x = lu.solve(b);
    if (!x.allFinite()) return;
    for (const Halfspace& h : hs) {
      if (h.normal.dot(x) - h.offset > 1e-9 * h.normal.norm() * scale) return;
    }
    found.push_back(x);
  });

  std::sort(found.begin(), found.end(), [](const Point& a, const Point& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  PointCloud out(dim);
  std::vector<Point> kept;
  for (const Point& p : found) {
    bool duplicate = false;
    for (const Point& q : kept) {
      if ((p - q).norm() <= 1e-10 * scale) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      kept.push_back(p);
      out.push_back(p);
    }
  }
  return out;
}

// Cholesky factor L of A = L L^T; throws for non-positive-definite shapes.
Eigen::LLT<Matrix> factor_shape(const Matrix& shape) {
  Eigen::LLT<Matrix> llt(shape);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::kDegenerateBody, "ellipsoid shape matrix is not positive definite");
  }
  return llt;
}

}  // namespace

double unit_ball_volume(int dim) {
  const double half = 0.5 * dim;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

// ---------------------------------------------------------------- AffineMap

AffineMap::AffineMap(Matrix linear, Vector offset) : linear_(std::move(linear)), offset_(std::move(offset)) {
  if (linear_.rows() != linear_.cols() || linear_.rows() != offset_.size()) {
    fail(ErrorCode::kDimensionMismatch, "affine map needs a square linear part matching the offset");
  }
  if (!linear_.allFinite() || !offset_.allFinite()) {
    fail(ErrorCode::kInvalidArgument, "affine map has non-finite entries");
  }
  det_ = linear_.determinant();
  if (!(std::abs(det_) > 0.0) || !std::isfinite(det_)) {
    fail(ErrorCode::kInvalidArgument, "affine map is singular");
  }
}

AffineMap AffineMap::identity(int dim) { return {Matrix::Identity(dim, dim), Vector::Zero(dim)}; }

AffineMap AffineMap::scaling(int dim, double factor) {
  return {factor * Matrix::Identity(dim, dim), Vector::Zero(dim)};
}

PointCloud AffineMap::apply(const PointCloud& points) const {
  PointCloud out(points.dim());
  out.reserve(points.size());
  Vector y(points.dim());
  for (std::size_t i = 0; i < points.size(); ++i) {
    y.noalias() = linear_ * as_vector(points[i]) + offset_;
    out.push_back(y);
  }
  return out;
}

AffineMap AffineMap::inverse() const {
  const Matrix inv = linear_.inverse();
  return {inv, -inv * offset_};
}

AffineMap AffineMap::compose(const AffineMap& other) const {
  return {linear_ * other.linear_, linear_ * other.offset_ + offset_};
}

// ---------------------------------------------------------------- polytopes

VPolytope::VPolytope(const PointCloud& points) {
  require_dim(points.dim());
  HullResult hull;
  try {
    hull = convex_hull(points);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDegenerateHull) {
      fail(ErrorCode::kDegenerateBody, "polytope has empty interior: " + std::string(e.what()));
    }
    throw;
  }
  auto data = std::make_shared<detail::PolytopeData>();
  data->vertices = hull.vertices();
  for (std::size_t f = 0; f < hull.facets.size(); ++f) {
    data->facets.push_back({hull.facets[f].normal, hull.facets[f].offset, hull.planes[f]});
  }
  data->volume = polytope_volume(hull);
  if (!(data->volume > 0.0)) fail(ErrorCode::kDegenerateBody, "polytope has zero volume");
  data_ = std::move(data);
}

HPolytope::HPolytope(std::vector<Halfspace> halfspaces) : halfspaces_(std::move(halfspaces)) {
  if (halfspaces_.empty()) fail(ErrorCode::kUnbounded, "H-polytope needs halfspaces");
  const int dim = static_cast<int>(halfspaces_.front().normal.size());
  require_dim(dim);
  for (const Halfspace& h : halfspaces_) {
    if (h.normal.size() != dim) fail(ErrorCode::kDimensionMismatch, "halfspace normals differ in dimension");
    if (!h.normal.allFinite() || !std::isfinite(h.offset)) {
      fail(ErrorCode::kInvalidArgument, "halfspace has non-finite entries");
    }
    if (!(h.normal.norm() > 0.0)) fail(ErrorCode::kInvalidArgument, "halfspace normal is zero");
  }
  if (dim > kMaxHullDim) {
    fail(ErrorCode::kUnsupported, "H-to-V conversion unsupported at this dimension (d = " +
                                      std::to_string(dim) + ")");
  }
  const PointCloud verts = enumerate_vertices(halfspaces_, dim);
  if (static_cast<int>(verts.size()) < dim + 1) {
    fail(ErrorCode::kDegenerateBody, "H-polytope is empty or has empty interior");
  }
  vertex_form_ = std::make_shared<const VPolytope>(verts);
}

// ---------------------------------------------------------------- ConvexBody

ConvexBody ConvexBody::ball(Point center, double radius) {
  const int dim = static_cast<int>(center.size());
  require_dim(dim);
  if (!center.allFinite() || !std::isfinite(radius)) fail(ErrorCode::kInvalidArgument, "ball has non-finite data");
  if (!(radius > 0.0)) fail(ErrorCode::kDegenerateBody, "ball radius must be positive");
  return {Ball{std::move(center), radius}, dim};
}

ConvexBody ConvexBody::ellipsoid(Point center, Matrix shape) {
  const int dim = static_cast<int>(center.size());
  require_dim(dim);
  if (shape.rows() != dim || shape.cols() != dim) {
    fail(ErrorCode::kDimensionMismatch, "ellipsoid shape must be d x d");
  }
  if (!center.allFinite() || !all_finite(shape)) fail(ErrorCode::kInvalidArgument, "ellipsoid has non-finite data");
  if ((shape - shape.transpose()).norm() > 1e-12 * shape.norm()) {
    fail(ErrorCode::kInvalidArgument, "ellipsoid shape matrix must be symmetric");
  }
  factor_shape(shape);
  return {Ellipsoid{std::move(center), std::move(shape)}, dim};
}

ConvexBody ConvexBody::vpolytope(const PointCloud& points) {
  VPolytope p(points);
  const int dim = p.dim();
  return {std::move(p), dim};
}

ConvexBody ConvexBody::hpolytope(std::vector<Halfspace> halfspaces) {
  HPolytope p(std::move(halfspaces));
  const int dim = p.dim();
  return {std::move(p), dim};
}

std::string ConvexBody::kind() const {
  switch (body_.index()) {
    case 0: return "ball";
    case 1: return "ellipsoid";
    case 2: return "vpolytope";
    default: return "hpolytope";
  }
}

// ---------------------------------------------------------------- operations

bool contains(const ConvexBody& body, std::span<const double> p) {
  if (static_cast<int>(p.size()) != body.dim()) {
    fail(ErrorCode::kDimensionMismatch, "point dimension " + std::to_string(p.size()) +
                                            " differs from body dimension " + std::to_string(body.dim()));
  }
  const auto x = as_vector(p);
  struct Visitor {
    std::span<const double> p;
    const Eigen::Map<const Vector>& x;
    bool operator()(const Ball& b) const { return (x - b.center).squaredNorm() <= b.radius * b.radius; }
    bool operator()(const Ellipsoid& e) const {
      const Vector d = x - e.center;
      return d.dot(e.shape * d) <= 1.0;
    }
    bool operator()(const VPolytope& v) const {
      for (const PolytopeFacet& f : v.facets()) {
        if (f.plane.side(p) > 0) return false;
      }
      return true;
    }
    bool operator()(const HPolytope& h) const {
      for (const Halfspace& hs : h.halfspaces()) {
        const std::span<const double> a(hs.normal.data(), static_cast<std::size_t>(hs.normal.size()));
        if (predicates::affine_sign(a, p, hs.offset) > 0) return false;
      }
      return true;
    }
  };
  return visit_body(body, Visitor{p, x});
}

bool contains(const ConvexBody& body, const Point& p) {
  return contains(body, std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

double support(const ConvexBody& body, const Vector& u) {
  if (u.size() != body.dim()) fail(ErrorCode::kDimensionMismatch, "support direction has wrong dimension");
  if (std::abs(u.norm() - 1.0) > 1e-12) fail(ErrorCode::kInvalidArgument, "support direction must be a unit vector");
  struct Visitor {
    const Vector& u;
    double operator()(const Ball& b) const { return u.dot(b.center) + b.radius; }
    double operator()(const Ellipsoid& e) const {
      const Vector w = factor_shape(e.shape).solve(u);
      return u.dot(e.center) + std::sqrt(std::max(0.0, u.dot(w)));
    }
    double operator()(const VPolytope& v) const {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < v.vertices().size(); ++i) best = std::max(best, u.dot(as_vector(v.vertices()[i])));
      return best;
    }
    double operator()(const HPolytope& h) const { return (*this)(h.vertex_form()); }
  };
  return visit_body(body, Visitor{u});
}

double volume(const ConvexBody& body) {
  struct Visitor {
    int dim;
    double operator()(const Ball& b) const { return unit_ball_volume(dim) * std::pow(b.radius, dim); }
    double operator()(const Ellipsoid& e) const {
      const Matrix l = factor_shape(e.shape).matrixL();
      // sqrt(det A) = prod diag(L)
      return unit_ball_volume(dim) / l.diagonal().prod();
    }
    double operator()(const VPolytope& v) const { return v.volume(); }
    double operator()(const HPolytope& h) const { return h.vertex_form().volume(); }
  };
  return visit_body(body, Visitor{body.dim()});
}

ConvexBody affine_image(const AffineMap& map, const ConvexBody& body) {
  if (map.dim() != body.dim()) fail(ErrorCode::kDimensionMismatch, "affine map and body differ in dimension");
  const Matrix& m = map.linear();
  const Vector& t = map.offset();
  struct Visitor {
    const AffineMap& map;
    const Matrix& m;
    const Vector& t;
    ConvexBody operator()(const Ball& b) const {
      const int dim = static_cast<int>(b.center.size());
      const Matrix gram = m.transpose() * m;
      const double s2 = gram.trace() / dim;
      if ((gram - s2 * Matrix::Identity(dim, dim)).norm() <= 1e-12 * s2) {
        return ConvexBody::ball(map.apply(b.center), std::sqrt(s2) * b.radius);
      }
      const Matrix inv = m.inverse();
      Matrix shape = inv.transpose() * inv / (b.radius * b.radius);
      shape = 0.5 * (shape + shape.transpose()).eval();
      return ConvexBody::ellipsoid(map.apply(b.center), shape);
    }
    ConvexBody operator()(const Ellipsoid& e) const {
      const Matrix inv = m.inverse();
      Matrix shape = inv.transpose() * e.shape * inv;
      shape = 0.5 * (shape + shape.transpose()).eval();
      return ConvexBody::ellipsoid(map.apply(e.center), shape);
    }
    ConvexBody operator()(const VPolytope& v) const { return ConvexBody::vpolytope(map.apply(v.vertices())); }
    ConvexBody operator()(const HPolytope& h) const {
      const Matrix inv_t = m.inverse().transpose();
      std::vector<Halfspace> out;
      for (const Halfspace& hs : h.halfspaces()) {
        const Vector n = inv_t * hs.normal;
        out.push_back({n, hs.offset + n.dot(t)});
      }
      return ConvexBody::hpolytope(std::move(out));
    }
  };
  return visit_body(body, Visitor{map, m, t});
}

Box bounding_box(const ConvexBody& body) {
  const int d = body.dim();
  Box box{Vector(d), Vector(d)};
  for (int i = 0; i < d; ++i) {
    const Vector e = Vector::Unit(d, i);
    box.upper[i] = support(body, e);
    box.lower[i] = -support(body, -e);
  }
  return box;
}

PointCloud vertex_points(const ConvexBody& body) {
  if (const auto* v = body.as<VPolytope>()) return v->vertices();
  if (const auto* h = body.as<HPolytope>()) return h->vertex_form().vertices();
  return PointCloud(body.dim());
}

ConvexBody cube_body(int dim, double lo, double hi) {
  require_dim(dim);
  PointCloud pts(dim);
  for (int code = 0; code < (1 << dim); ++code) {
    Point p(dim);
    for (int i = 0; i < dim; ++i) p[i] = (code & (1 << i)) ? hi : lo;
    pts.push_back(p);
  }
  return ConvexBody::vpolytope(pts);
}

ConvexBody standard_simplex(int dim) {
  require_dim(dim);
  PointCloud pts(dim);
  pts.push_back(Point(Point::Zero(dim)));
  for (int i = 0; i < dim; ++i) pts.push_back(Point(Point::Unit(dim, i)));
  return ConvexBody::vpolytope(pts);
}

ConvexBody builtin_body(const std::string& name) {
  if (name == "disc") return ConvexBody::ball(Point::Zero(2), 1.0);
  if (name == "ball3") return ConvexBody::ball(Point::Zero(3), 1.0);
  if (name == "square") return cube_body(2);
  if (name == "cube3") return cube_body(3);
  if (name == "triangle") return standard_simplex(2);
  if (name == "simplex3") return standard_simplex(3);

  static const std::regex ellipse(R"(ellipse\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\))");
  static const std::regex family(R"((ball|cube|simplex)([2-6]))");
  std::smatch m;
  if (std::regex_match(name, m, ellipse)) {
    double a = 0.0;
    double b = 0.0;
    try {
      a = std::stod(m[1].str());
      b = std::stod(m[2].str());
    } catch (const std::exception&) {
      fail(ErrorCode::kParse, "bad ellipse semi-axes in '" + name + "'");
    }
    if (!(a > 0.0) || !(b > 0.0)) fail(ErrorCode::kDegenerateBody, "ellipse semi-axes must be positive");
    Matrix shape = Matrix::Zero(2, 2);
    shape(0, 0) = 1.0 / (a * a);
    shape(1, 1) = 1.0 / (b * b);
    return ConvexBody::ellipsoid(Point::Zero(2), shape);
  }
  if (std::regex_match(name, m, family)) {
    const int dim = std::stoi(m[2].str());
    if (m[1] == "ball") return ConvexBody::ball(Point::Zero(dim), 1.0);
    if (m[1] == "cube") return cube_body(dim);
    return standard_simplex(dim);
  }
  fail(ErrorCode::kInvalidArgument, "unknown builtin body '" + name + "'");
}

}  // namespace randpoly
