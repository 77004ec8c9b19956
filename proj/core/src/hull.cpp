#include "randpoly/hull.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "randpoly/error.hpp"

namespace randpoly {
namespace {

using predicates::Hyperplane;
using predicates::PointRef;

struct Facet {
  std::array<int, kMaxHullDim> v{};
  std::array<int, kMaxHullDim> nbr{};
  Hyperplane plane;
  unsigned mark = 0;
  bool alive = false;
};

struct RidgeEntry {
  std::array<int, kMaxHullDim> key{};
  int facet = 0;
  int slot = 0;
};

bool lex_less(PointRef a, PointRef b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Incremental beneath-beyond construction. Points are inserted in
// lexicographic order, so each new point is extreme for the processed prefix
// and some facet incident to the previously inserted point is visible from
// it; the visible region is found by walking facet adjacency from there.
class HullBuilder {
 public:
  explicit HullBuilder(const PointCloud& points) : pts_(points), dim_(points.dim()) {}

  HullResult build(std::vector<int> candidates);

 private:
  PointRef at(int i) const { return pts_[static_cast<std::size_t>(i)]; }

  void init_simplex(const std::vector<int>& simplex);
  bool insert(int p);
  int new_facet();
  Hyperplane make_plane(const std::array<int, kMaxHullDim>& verts, int below) const;
  HullResult finish() const;

  const PointCloud& pts_;
  int dim_;
  std::vector<Facet> facets_;
  std::vector<int> free_;
  std::vector<int> star_;
  unsigned epoch_ = 0;

  std::vector<int> visible_;
  std::vector<std::pair<int, int>> horizon_;
  std::vector<int> stack_;
  std::vector<int> below_;
  std::vector<RidgeEntry> ridges_;
};

// Orients the plane through `verts` so that input point `below`, which must
// lie strictly off it, is on the negative side. The test is exact; a rounded
// centroid can fall outside a sliver simplex.
Hyperplane HullBuilder::make_plane(const std::array<int, kMaxHullDim>& verts, int below) const {
  std::array<PointRef, kMaxHullDim> refs;
  for (int i = 0; i < dim_; ++i) refs[i] = at(verts[i]);
  Hyperplane h(std::span<const PointRef>(refs.data(), static_cast<std::size_t>(dim_)));
  const int s = h.side(at(below));
  if (s == 0) fail(ErrorCode::kDegenerateHull, "orientation reference lies on a facet");
  if (s > 0) h.flip();
  return h;
}

int HullBuilder::new_facet() {
  if (!free_.empty()) {
    const int f = free_.back();
    free_.pop_back();
    facets_[f].alive = true;
    facets_[f].mark = 0;
    return f;
  }
  facets_.emplace_back();
  facets_.back().alive = true;
  return static_cast<int>(facets_.size()) - 1;
}

void HullBuilder::init_simplex(const std::vector<int>& simplex) {
  facets_.reserve(64);
  for (int omit = 0; omit <= dim_; ++omit) {
    const int f = new_facet();
    int k = 0;
    for (int j = 0; j <= dim_; ++j) {
      if (j == omit) continue;
      facets_[f].v[k] = simplex[j];
      // The ridge opposite simplex[j] is shared with the facet omitting j.
      facets_[f].nbr[k] = j;
      ++k;
    }
  }
  for (int f = 0; f <= dim_; ++f) facets_[f].plane = make_plane(facets_[f].v, simplex[f]);
  star_.clear();
  for (int f = 0; f < dim_; ++f) star_.push_back(f);  // facets incident to simplex[d]
}

bool HullBuilder::insert(int p) {
  const PointRef q = at(p);
  int start = -1;
  for (int f : star_) {
    if (facets_[f].alive && facets_[f].plane.side(q) > 0) {
      start = f;
      break;
    }
  }
  if (start < 0) {
    for (int f = 0; f < static_cast<int>(facets_.size()); ++f) {
      if (facets_[f].alive && facets_[f].plane.side(q) > 0) {
        start = f;
        break;
      }
    }
  }
  if (start < 0) return false;  // inside or on the boundary

  // Facets with q on or above their hyperplane are removed. Including the
  // coplanar ones keeps points inside flat faces from surviving as vertices.
  epoch_ += 2;
  const unsigned seen_visible = epoch_;
  const unsigned seen_hidden = epoch_ + 1;
  visible_.clear();
  horizon_.clear();
  stack_.clear();
  stack_.push_back(start);
  facets_[start].mark = seen_visible;
  while (!stack_.empty()) {
    const int f = stack_.back();
    stack_.pop_back();
    visible_.push_back(f);
    for (int k = 0; k < dim_; ++k) {
      const int g = facets_[f].nbr[k];
      Facet& nb = facets_[g];
      if (nb.mark == seen_visible) continue;
      if (nb.mark != seen_hidden) {
        if (nb.plane.side(q) >= 0) {
          nb.mark = seen_visible;
          stack_.push_back(g);
          continue;
        }
        nb.mark = seen_hidden;
      }
      horizon_.emplace_back(f, k);
    }
  }

  star_.clear();
  below_.clear();
  ridges_.clear();
  for (const auto& [f, k] : horizon_) {
    const int n = new_facet();
    // facets_ may have grown; take references only after allocation.
    Facet& old = facets_[f];
    Facet& fresh = facets_[n];
    fresh.v = old.v;
    fresh.v[k] = p;
    const int g = old.nbr[k];
    fresh.nbr[k] = g;
    Facet& outer = facets_[g];
    for (int m = 0; m < dim_; ++m) {
      if (outer.nbr[m] == f) {
        outer.nbr[m] = n;
        // q is strictly beneath the hidden facet g, so g's vertex off the
        // shared ridge is strictly beneath the new facet.
        below_.push_back(outer.v[m]);
        break;
      }
    }
    for (int i = 0; i < dim_; ++i) {
      if (i == k) continue;
      RidgeEntry e;
      int c = 0;
      for (int j = 0; j < dim_; ++j) {
        if (j != i) e.key[c++] = fresh.v[j];
      }
      std::sort(e.key.begin(), e.key.begin() + c);
      e.facet = n;
      e.slot = i;
      ridges_.push_back(e);
    }
    star_.push_back(n);
  }
  for (std::size_t i = 0; i < star_.size(); ++i) facets_[star_[i]].plane = make_plane(facets_[star_[i]].v, below_[i]);

  const int key_len = dim_ - 1;
  std::sort(ridges_.begin(), ridges_.end(), [key_len](const RidgeEntry& a, const RidgeEntry& b) {
    return std::lexicographical_compare(a.key.begin(), a.key.begin() + key_len, b.key.begin(),
                                        b.key.begin() + key_len);
  });
  if (ridges_.size() % 2 != 0) fail(ErrorCode::kDegenerateHull, "unmatched ridge in hull update");
  for (std::size_t i = 0; i < ridges_.size(); i += 2) {
    const RidgeEntry& a = ridges_[i];
    const RidgeEntry& b = ridges_[i + 1];
    if (!std::equal(a.key.begin(), a.key.begin() + key_len, b.key.begin())) {
      fail(ErrorCode::kDegenerateHull, "unmatched ridge in hull update");
    }
    facets_[a.facet].nbr[a.slot] = b.facet;
    facets_[b.facet].nbr[b.slot] = a.facet;
  }

  for (int f : visible_) {
    facets_[f].alive = false;
    free_.push_back(f);
  }
  return true;
}

HullResult HullBuilder::build(std::vector<int> candidates) {
  std::sort(candidates.begin(), candidates.end(), [this](int a, int b) {
    const PointRef pa = at(a);
    const PointRef pb = at(b);
    if (lex_less(pa, pb)) return true;
    if (lex_less(pb, pa)) return false;
    return a < b;
  });
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [this](int a, int b) {
                                 const PointRef pa = at(a);
                                 const PointRef pb = at(b);
                                 return std::equal(pa.begin(), pa.end(), pb.begin());
                               }),
                   candidates.end());

  // Greedy affinely independent prefix. A float Gram-Schmidt residual
  // certifies independence when clearly nonzero; otherwise decide exactly.
  std::vector<int> simplex;
  std::vector<int> skipped;
  std::vector<Vector> basis;
  std::size_t pos = 0;
  for (; pos < candidates.size() && static_cast<int>(simplex.size()) <= dim_; ++pos) {
    const int c = candidates[pos];
    if (simplex.empty()) {
      simplex.push_back(c);
      continue;
    }
    Vector r = as_vector(at(c)) - as_vector(at(simplex[0]));
    const double scale = r.norm();
    for (const Vector& b : basis) r -= b.dot(r) * b;
    bool independent = r.norm() > 1e-6 * scale;
    if (!independent) {
      std::vector<PointRef> refs;
      for (int s : simplex) refs.push_back(at(s));
      refs.push_back(at(c));
      independent = predicates::affine_rank(refs) == static_cast<int>(simplex.size());
    }
    if (independent) {
      simplex.push_back(c);
      if (r.norm() > 0.0) {
        Vector b = as_vector(at(c)) - as_vector(at(simplex[0]));
        for (const Vector& e : basis) b -= e.dot(b) * e;
        if (b.norm() > 0.0) basis.push_back(b / b.norm());
      }
    } else {
      skipped.push_back(c);
    }
  }
  if (static_cast<int>(simplex.size()) != dim_ + 1) {
    fail(ErrorCode::kDegenerateHull, "points do not span R^" + std::to_string(dim_));
  }

  init_simplex(simplex);
  if (!skipped.empty()) {
    for (int s : skipped) insert(s);
    const int top = simplex.back();
    star_.clear();
    for (int f = 0; f < static_cast<int>(facets_.size()); ++f) {
      if (!facets_[f].alive) continue;
      for (int k = 0; k < dim_; ++k) {
        if (facets_[f].v[k] == top) {
          star_.push_back(f);
          break;
        }
      }
    }
  }
  for (; pos < candidates.size(); ++pos) insert(candidates[pos]);
  return finish();
}

HullResult HullBuilder::finish() const {
  HullResult out;
  out.dim = dim_;
  out.points = PointCloud(dim_);

  std::vector<int> facet_id(facets_.size(), -1);
  std::vector<int> used;
  int count = 0;
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    if (!facets_[f].alive) continue;
    facet_id[f] = count++;
    for (int k = 0; k < dim_; ++k) used.push_back(facets_[f].v[k]);
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  // `used` is sorted by input index; compact ids follow lexicographic order
  // of the points for a canonical vertex list.
  std::sort(used.begin(), used.end(), [this](int a, int b) {
    if (lex_less(at(a), at(b))) return true;
    if (lex_less(at(b), at(a))) return false;
    return a < b;
  });
  std::vector<int> compact(pts_.size(), -1);
  for (std::size_t i = 0; i < used.size(); ++i) {
    compact[used[i]] = static_cast<int>(i);
    out.points.push_back(at(used[i]));
    out.source_index.push_back(static_cast<std::size_t>(used[i]));
  }
  // The vertex centroid is interior even when the seed simplex is a sliver.
  out.interior_point = Point::Zero(dim_);
  for (std::size_t i = 0; i < out.points.size(); ++i) out.interior_point += as_vector(out.points[i]);
  out.interior_point /= static_cast<double>(out.points.size());

  std::vector<std::vector<int>> incident(used.size());
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    if (!facets_[f].alive) continue;
    HullFacet hf;
    for (int k = 0; k < dim_; ++k) {
      const int v = compact[facets_[f].v[k]];
      hf.vertices.push_back(v);
      hf.neighbors.push_back(facet_id[facets_[f].nbr[k]]);
      incident[v].push_back(facet_id[f]);
    }
    hf.normal = facets_[f].plane.unit_normal();
    hf.offset = facets_[f].plane.offset();
    out.facets.push_back(std::move(hf));
    out.planes.push_back(facets_[f].plane);
  }

  // A point referenced by facets is extreme iff the normals of its incident
  // facets span R^d.
  for (std::size_t v = 0; v < used.size(); ++v) {
    const auto& inc = incident[v];
    bool extreme = false;
    if (static_cast<int>(inc.size()) >= dim_) {
      Matrix normals(static_cast<Eigen::Index>(inc.size()), dim_);
      for (std::size_t i = 0; i < inc.size(); ++i) normals.row(static_cast<Eigen::Index>(i)) = out.facets[inc[i]].normal.transpose();
      const Matrix gram = normals.transpose() * normals;
      const double smallest = Eigen::SelfAdjointEigenSolver<Matrix>(gram, Eigen::EigenvaluesOnly).eigenvalues()(0);
      extreme = smallest > 1e-12;
      if (!extreme) {
        std::vector<const Hyperplane*> planes;
        for (int f : inc) planes.push_back(&out.planes[f]);
        extreme = predicates::normal_rank(planes) == dim_;
      }
    }
    if (extreme) out.vertex_ids.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<Vector> prefilter_directions(int dim) {
  std::vector<Vector> dirs;
  if (dim == 2) {
    for (int k = 0; k < 16; ++k) {
      const double a = k * std::numbers::pi / 8.0;
      Vector u(2);
      u << std::cos(a), std::sin(a);
      dirs.push_back(u);
    }
    return dirs;
  }
  if (dim <= 4) {
    int total = 1;
    for (int i = 0; i < dim; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      Vector u(dim);
      int c = code;
      for (int i = 0; i < dim; ++i) {
        u[i] = static_cast<double>(c % 3) - 1.0;
        c /= 3;
      }
      if (u.squaredNorm() > 0.0) dirs.push_back(u);
    }
    return dirs;
  }
  for (int i = 0; i < dim; ++i) {
    dirs.push_back(Vector::Unit(dim, i));
    dirs.push_back(-Vector::Unit(dim, i));
  }
  for (int code = 0; code < (1 << dim); ++code) {
    Vector u(dim);
    for (int i = 0; i < dim; ++i) u[i] = (code & (1 << i)) ? 1.0 : -1.0;
    dirs.push_back(u);
  }
  return dirs;
}

// Discards points certified strictly inside the hull of the extreme points
// along a fixed direction set. The survivors have the same hull.
std::vector<int> prefilter(const PointCloud& points) {
  const int dim = points.dim();
  const int n = static_cast<int>(points.size());
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);

  const std::vector<Vector> dirs = prefilter_directions(dim);
  if (n < 4 * static_cast<int>(dirs.size())) return all;

  std::vector<int> seeds;
  for (const Vector& u : dirs) {
    int best = 0;
    double best_val = as_vector(points[0]).dot(u);
    for (int i = 1; i < n; ++i) {
      const double val = as_vector(points[static_cast<std::size_t>(i)]).dot(u);
      if (val > best_val) {
        best_val = val;
        best = i;
      }
    }
    seeds.push_back(best);
  }
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  if (static_cast<int>(seeds.size()) < dim + 1) return all;

  HullResult inner;
  try {
    inner = HullBuilder(points).build(seeds);
  } catch (const Error&) {
    return all;
  }

  Point center = Point::Zero(dim);
  for (std::size_t i = 0; i < inner.points.size(); ++i) center += as_vector(inner.points[i]);
  center /= static_cast<double>(inner.points.size());
  double reach = 0.0;
  for (std::size_t i = 0; i < inner.points.size(); ++i) {
    reach = std::max(reach, (as_vector(inner.points[i]) - center).norm());
  }
  double inradius = std::numeric_limits<double>::infinity();
  for (const HullFacet& f : inner.facets) inradius = std::min(inradius, f.offset - f.normal.dot(center));
  inradius -= 1e-9 * reach;
  const double inradius_sq = inradius > 0.0 ? inradius * inradius : -1.0;

  std::vector<char> is_seed(static_cast<std::size_t>(n), 0);
  for (int s : seeds) is_seed[static_cast<std::size_t>(s)] = 1;

  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (is_seed[static_cast<std::size_t>(i)]) {
      keep.push_back(i);
      continue;
    }
    const PointRef p = points[static_cast<std::size_t>(i)];
    if ((as_vector(p) - center).squaredNorm() < inradius_sq) continue;
    bool strictly_inside = true;
    for (const Hyperplane& h : inner.planes) {
      if (h.side(p) >= 0) {
        strictly_inside = false;
        break;
      }
    }
    if (!strictly_inside) keep.push_back(i);
  }
  return keep;
}

}  // namespace

PointCloud HullResult::vertices() const {
  PointCloud out(dim);
  for (int v : vertex_ids) out.push_back(points[static_cast<std::size_t>(v)]);
  return out;
}

std::vector<std::size_t> HullResult::vertex_source_indices() const {
  std::vector<std::size_t> out;
  for (int v : vertex_ids) out.push_back(source_index[static_cast<std::size_t>(v)]);
  std::sort(out.begin(), out.end());
  return out;
}

HullResult convex_hull(const PointCloud& points) {
  const int dim = points.dim();
  if (dim < 2 || dim > kMaxHullDim) {
    fail(ErrorCode::kUnsupported, "convex hull supports 2 <= d <= " + std::to_string(kMaxHullDim) +
                                      ", got d = " + std::to_string(dim));
  }
  if (static_cast<int>(points.size()) < dim + 1) {
    fail(ErrorCode::kDegenerateHull, "degenerate hull: need at least d+1 points");
  }
  for (double c : points.data()) {
    if (!std::isfinite(c)) fail(ErrorCode::kInvalidArgument, "non-finite coordinate in hull input");
  }
  return HullBuilder(points).build(prefilter(points));
}

double polytope_volume(const HullResult& hull) {
  const int d = hull.dim;
  using Small = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxHullDim, kMaxHullDim>;
  double total = 0.0;
  Small m(d, d);
  for (const HullFacet& f : hull.facets) {
    for (int i = 0; i < d; ++i) {
      const PointRef p = hull.points[static_cast<std::size_t>(f.vertices[static_cast<std::size_t>(i)])];
      for (int c = 0; c < d; ++c) m(i, c) = p[static_cast<std::size_t>(c)] - hull.interior_point[c];
    }
    total += std::abs(m.determinant());
  }
  double factorial = 1.0;
  for (int i = 2; i <= d; ++i) factorial *= i;
  return total / factorial;
}

double missing_volume(const ConvexBody& body, const PointCloud& points) {
  if (!points.empty() && points.dim() != body.dim()) {
    fail(ErrorCode::kDimensionMismatch, "sample dimension differs from body dimension");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!contains(body, points[i])) {
      fail(ErrorCode::kSampleNotInBody, "sample not in body (point " + std::to_string(i) + ")");
    }
  }
  const double total = volume(body);
  if (static_cast<int>(points.size()) < body.dim() + 1) return total;
  double inside = 0.0;
  try {
    inside = polytope_volume(convex_hull(points));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateHull) throw;
    return total;
  }
  return std::clamp(total - inside, 0.0, total);
}

}  // namespace randpoly
