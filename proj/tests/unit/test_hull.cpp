#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "randpoly/bodies.hpp"
#include "randpoly/error.hpp"
#include "randpoly/hull.hpp"
#include "randpoly/rng.hpp"
#include "randpoly/sampler.hpp"

using namespace randpoly;
using Rational = boost::multiprecision::cpp_rational;
using P2 = std::array<double, 2>;

namespace {

int orient_exact(const P2& a, const P2& b, const P2& c) {
  const Rational v = (Rational(b[0]) - Rational(a[0])) * (Rational(c[1]) - Rational(a[1])) -
                     (Rational(b[1]) - Rational(a[1])) * (Rational(c[0]) - Rational(a[0]));
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

Rational dist2(const P2& a, const P2& b) {
  const Rational dx = Rational(b[0]) - Rational(a[0]);
  const Rational dy = Rational(b[1]) - Rational(a[1]);
  return dx * dx + dy * dy;
}

// Jarvis march with exact orientation; collinear points keep only the
// farthest, so the output is the set of extreme points.
std::set<P2> gift_wrap(const std::vector<P2>& pts) {
  std::vector<P2> u(pts);
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  std::set<P2> hull;
  const P2 start = u.front();
  P2 cur = start;
  do {
    hull.insert(cur);
    P2 next = u[0] == cur ? u[1] : u[0];
    for (const P2& c : u) {
      if (c == cur) continue;
      const int o = orient_exact(cur, next, c);
      if (o < 0 || (o == 0 && dist2(cur, c) > dist2(cur, next))) next = c;
    }
    cur = next;
  } while (cur != start && hull.size() <= u.size());
  return hull;
}

std::set<P2> hull_vertex_set(const PointCloud& pts) {
  const PointCloud v = convex_hull(pts).vertices();
  std::set<P2> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.insert({v[i][0], v[i][1]});
  return out;
}

PointCloud to_cloud(const std::vector<P2>& pts) {
  PointCloud c(2);
  for (const P2& p : pts) c.push_back(std::span<const double>(p));
  return c;
}

PointCloud cloud(int d, std::initializer_list<std::initializer_list<double>> rows) {
  PointCloud c(d);
  for (const auto& r : rows) c.push_back(std::span<const double>(r.begin(), r.size()));
  return c;
}

void check_invariants(const HullResult& h, const PointCloud& input) {
  const int d = h.dim;
  // Every input point satisfies every facet inequality.
  for (const HullFacet& f : h.facets) {
    for (std::size_t i = 0; i < input.size(); ++i) {
      const double lhs = f.normal.dot(as_vector(input[i]));
      ASSERT_LE(lhs, f.offset + 1e-10 * (1.0 + std::abs(f.offset)));
    }
    EXPECT_LT(f.normal.dot(h.interior_point), f.offset);
    ASSERT_EQ(static_cast<int>(f.vertices.size()), d);
    ASSERT_EQ(static_cast<int>(f.neighbors.size()), d);
  }
  // Each ridge is shared by exactly two facets, and adjacency is symmetric.
  std::map<std::vector<int>, int> ridges;
  for (std::size_t fi = 0; fi < h.facets.size(); ++fi) {
    const HullFacet& f = h.facets[fi];
    for (int k = 0; k < d; ++k) {
      std::vector<int> r;
      for (int j = 0; j < d; ++j)
        if (j != k) r.push_back(f.vertices[static_cast<std::size_t>(j)]);
      std::sort(r.begin(), r.end());
      ++ridges[r];
      const HullFacet& g = h.facets[static_cast<std::size_t>(f.neighbors[static_cast<std::size_t>(k)])];
      EXPECT_NE(std::find(g.neighbors.begin(), g.neighbors.end(), static_cast<int>(fi)), g.neighbors.end());
    }
  }
  for (const auto& [r, count] : ridges) EXPECT_EQ(count, 2);
}

}  // namespace

TEST(ConvexHull, SquareWithCenterDropsCenter) {
  const PointCloud pts = cloud(2, {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}});
  const HullResult h = convex_hull(pts);
  EXPECT_EQ(h.vertices().size(), 4u);
  EXPECT_EQ(h.vertex_source_indices(), (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_NEAR(polytope_volume(h), 1.0, 1e-15);
  check_invariants(h, pts);
}

TEST(ConvexHull, SimplexHasDPlusOneFacets) {
  for (int d = 2; d <= 6; ++d) {
    const PointCloud v = vertex_points(standard_simplex(d));
    const HullResult h = convex_hull(v);
    EXPECT_EQ(h.facets.size(), static_cast<std::size_t>(d + 1));
    EXPECT_NEAR(polytope_volume(h), 1.0 / std::tgamma(d + 1.0), 1e-14);
    check_invariants(h, v);
  }
}

TEST(ConvexHull, CubeFacesAreCoplanarButVerticesExact) {
  for (int d = 2; d <= 5; ++d) {
    PointCloud pts = vertex_points(cube_body(d, -1.0, 1.0));
    pts.push_back(Point(Vector::Zero(d)));
    pts.push_back(Point(Vector::Unit(d, 0)));  // on a face
    const HullResult h = convex_hull(pts);
    EXPECT_EQ(h.vertices().size(), std::size_t{1} << d);
    EXPECT_NEAR(polytope_volume(h), std::ldexp(1.0, d), 1e-12);
    check_invariants(h, pts);
  }
}

TEST(ConvexHull, DegenerateInputThrows) {
  const PointCloud line = cloud(2, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  try {
    convex_hull(line);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateHull);
  }
  const PointCloud plane = cloud(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.3, 0.2, 0}});
  EXPECT_THROW(convex_hull(plane), Error);
  EXPECT_THROW(convex_hull(cloud(2, {{0, 0}, {1, 0}})), Error);
}

TEST(ConvexHull, MatchesGiftWrappingOnRandomDiscPoints) {
  const UniformSampler disc(builtin_body("disc"));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RngStream s(11, seed);
    const PointCloud pts = disc.sample(100, s).points;
    std::vector<P2> raw;
    for (std::size_t i = 0; i < pts.size(); ++i) raw.push_back({pts[i][0], pts[i][1]});
    ASSERT_EQ(hull_vertex_set(pts), gift_wrap(raw)) << seed;
  }
}

// Integer grids force many exactly collinear triples and duplicates.
TEST(ConvexHull, MatchesGiftWrappingWithCollinearTriples) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    RngStream s(12, seed);
    const int grid = 3 + static_cast<int>(s() % 6);
    const int n = 3 + static_cast<int>(s() % 30);
    std::vector<P2> raw;
    for (int i = 0; i < n; ++i) {
      raw.push_back({static_cast<double>(s() % static_cast<std::uint64_t>(grid)) * 0.1,
                     static_cast<double>(s() % static_cast<std::uint64_t>(grid)) * 0.1});
    }
    const PointCloud pts = to_cloud(raw);
    std::vector<std::span<const double>> refs;
    for (std::size_t i = 0; i < pts.size(); ++i) refs.push_back(pts[i]);
    if (predicates::affine_rank(refs) < 2) {
      EXPECT_THROW(convex_hull(pts), Error);
      continue;
    }
    const HullResult h = convex_hull(pts);
    ASSERT_EQ(hull_vertex_set(pts), gift_wrap(raw)) << seed;
    check_invariants(h, pts);
  }
}

TEST(ConvexHull, InvariantsOnRandomClouds) {
  for (int d = 2; d <= 5; ++d) {
    const UniformSampler sampler(builtin_body("ball" + std::to_string(d)));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      RngStream s(13, seed);
      const PointCloud pts = sampler.sample(200, s).points;
      check_invariants(convex_hull(pts), pts);
    }
  }
}

TEST(ConvexHull, DeterministicUnderInputPermutation) {
  RngStream s(14, 0);
  const PointCloud pts = UniformSampler(builtin_body("ball3")).sample(300, s).points;
  PointCloud rev(3);
  for (std::size_t i = pts.size(); i-- > 0;) rev.push_back(pts[i]);
  EXPECT_EQ(convex_hull(pts).vertices(), convex_hull(rev).vertices());
  EXPECT_EQ(polytope_volume(convex_hull(pts)), polytope_volume(convex_hull(rev)));
}

TEST(ConvexHull, AffineEquivariance) {
  for (int d = 2; d <= 4; ++d) {
    RngStream s(15, static_cast<std::uint64_t>(d));
    const PointCloud pts = UniformSampler(builtin_body("ball" + std::to_string(d))).sample(400, s).points;
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = s.uniform() - 0.5 + (i == j ? 2.0 : 0.0);
    const AffineMap t(m, Vector::Constant(d, 0.25));
    const HullResult h = convex_hull(pts);
    const HullResult th = convex_hull(t.apply(pts));
    EXPECT_EQ(h.vertex_source_indices(), th.vertex_source_indices());
    const double expect = std::abs(t.determinant()) * polytope_volume(h);
    EXPECT_NEAR(polytope_volume(th), expect, 1e-9 * expect);
  }
}

TEST(PolytopeVolume, DiscHullMatchesMonteCarlo) {
  RngStream s(16, 0);
  const PointCloud pts = UniformSampler(builtin_body("disc")).sample(1000, s).points;
  const HullResult h = convex_hull(pts);
  const double v = polytope_volume(h);
  EXPECT_GT(v, 0.0);
  EXPECT_LT(v, std::numbers::pi);
  const int n = 1000000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * s.uniform() - 1.0;
    const double y = 2.0 * s.uniform() - 1.0;
    bool inside = true;
    for (const HullFacet& f : h.facets) inside = inside && f.normal[0] * x + f.normal[1] * y <= f.offset;
    hits += inside;
  }
  const double p = v / 4.0;
  EXPECT_NEAR(static_cast<double>(hits) / n, p, 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST(MissingVolume, Examples) {
  const ConvexBody sq = builtin_body("square");
  EXPECT_EQ(missing_volume(sq, vertex_points(sq)), 0.0);
  const ConvexBody disc = builtin_body("disc");
  EXPECT_EQ(missing_volume(disc, cloud(2, {{0, 0}, {0.5, 0.5}})), std::numbers::pi);
  EXPECT_EQ(missing_volume(disc, cloud(2, {{0, 0}, {0.5, 0.5}, {-0.25, -0.25}})), std::numbers::pi);
  try {
    missing_volume(disc, cloud(2, {{0, 0}, {0.5, 0.5}, {2, 0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSampleNotInBody);
  }
}

TEST(MissingVolume, MonotoneInNestedPrefixes) {
  for (const char* name : {"disc", "cube3", "simplex3"}) {
    const ConvexBody body = builtin_body(name);
    RngStream s(17, 0);
    const PointCloud pts = UniformSampler(body).sample(2000, s).points;
    double prev = volume(body);
    for (std::size_t n = 2; n <= pts.size(); n = n * 3 / 2 + 1) {
      const double v = missing_volume(body, pts.prefix(n));
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, prev) << name << " n=" << n;
      prev = v;
    }
  }
}

TEST(MissingVolume, DiscMatchesLargeMonteCarlo) {
  const ConvexBody disc = builtin_body("disc");
  RngStream s(18, 0);
  const PointCloud pts = UniformSampler(disc).sample(50, s).points;
  const double v = missing_volume(disc, pts);
  const HullResult h = convex_hull(pts);
  const long n = 10000000;
  long hits = 0;
  for (long i = 0; i < n; ++i) {
    const double x = 2.0 * s.uniform() - 1.0;
    const double y = 2.0 * s.uniform() - 1.0;
    if (x * x + y * y > 1.0) continue;
    bool inside = true;
    for (const HullFacet& f : h.facets) inside = inside && f.normal[0] * x + f.normal[1] * y <= f.offset;
    hits += !inside;
  }
  const double p = v / 4.0;
  EXPECT_NEAR(static_cast<double>(hits) / static_cast<double>(n), p,
              4.0 * std::sqrt(p * (1 - p) / static_cast<double>(n)));
}
