#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "randpoly/bodies.hpp"
#include "randpoly/ellipsoid.hpp"
#include "randpoly/error.hpp"
#include "randpoly/experiments.hpp"
#include "randpoly/rng.hpp"
#include "randpoly/sampler.hpp"
#include "randpoly/stats.hpp"

using namespace randpoly;

namespace {

constexpr double kPi = std::numbers::pi;

PointCloud cloud2(std::initializer_list<std::pair<double, double>> pts) {
  PointCloud c(2);
  for (const auto& [x, y] : pts) {
    const double p[] = {x, y};
    c.push_back(std::span<const double>(p));
  }
  return c;
}

}  // namespace

TEST(Mvee, SquareGivesCircumcircle) {
  const MveeCertificate c = mvee(cube_body(2, -1.0, 1.0));
  EXPECT_LE(c.ellipsoid.center.norm(), 1e-6);
  // Radius sqrt(2): A = I / 2.
  EXPECT_LE((c.ellipsoid.shape - Matrix::Identity(2, 2) / 2.0).norm(), 1e-6);
  EXPECT_NEAR(c.ratio, kPi / 2.0, 1e-6);
  EXPECT_LE(c.ratio, 4.0);
  EXPECT_TRUE(ratio_check(cube_body(2, -1.0, 1.0), c));
}

TEST(Mvee, EquilateralTriangleGivesCircumcircle) {
  const double h = std::sqrt(3.0) / 2.0;
  const ConvexBody tri = ConvexBody::vpolytope(cloud2({{0, 0}, {1, 0}, {0.5, h}}));
  const MveeCertificate c = mvee(tri);
  // Circumradius 1/sqrt(3) about the centroid; ratio pi / (3 sqrt(3) / 4).
  EXPECT_NEAR(c.ellipsoid.center[0], 0.5, 1e-6);
  EXPECT_NEAR(c.ellipsoid.center[1], h / 3.0, 1e-6);
  EXPECT_NEAR(c.ratio, (kPi / 3.0) / (std::sqrt(3.0) / 4.0), 1e-6);
  EXPECT_NEAR(c.ratio, 2.4184, 1e-4);
  EXPECT_TRUE(ratio_check(tri, c));
}

TEST(Mvee, CubeGivesBallOfRadiusSqrtD) {
  for (int d = 2; d <= 5; ++d) {
    const ConvexBody cube = cube_body(d, -1.0, 1.0);
    const MveeCertificate c = mvee(cube);
    const PointCloud v = vertex_points(cube);
    ASSERT_EQ(v.size(), std::size_t{1} << d);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vector r = as_vector(v[i]) - c.ellipsoid.center;
      EXPECT_NEAR(r.dot(c.ellipsoid.shape * r), 1.0, 1e-6);
      EXPECT_NEAR(r.norm(), std::sqrt(static_cast<double>(d)), 1e-12);
    }
    EXPECT_LE((c.ellipsoid.shape - Matrix::Identity(d, d) / d).norm(), 1e-6) << d;
    EXPECT_TRUE(ratio_check(cube, c));
  }
}

TEST(Mvee, ObjectiveNonDecreasing) {
  RngStream s(1, 0);
  const PointCloud pts = UniformSampler(builtin_body("ball3")).sample(200, s).points;
  MveeOptions opt;
  opt.record_objective = true;
  const MveeCertificate c = mvee(pts, opt);
  ASSERT_GE(c.objective.size(), 2u);
  for (std::size_t i = 1; i < c.objective.size(); ++i) {
    EXPECT_GE(c.objective[i], c.objective[i - 1] - 1e-12 * std::abs(c.objective[i - 1])) << i;
  }
  EXPECT_EQ(c.iterations + 1, c.objective.size());
}

TEST(Mvee, DeterministicAndTolerant) {
  RngStream s(2, 0);
  const PointCloud pts = UniformSampler(builtin_body("disc")).sample(100, s).points;
  const MveeCertificate a = mvee(pts);
  const MveeCertificate b = mvee(pts);
  EXPECT_EQ(a.ellipsoid.shape, b.ellipsoid.shape);
  EXPECT_EQ(a.iterations, b.iterations);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vector r = as_vector(pts[i]) - a.ellipsoid.center;
    EXPECT_LE(r.dot(a.ellipsoid.shape * r), 1.0 + 1e-12);
  }
}

TEST(Mvee, Errors) {
  EXPECT_THROW(mvee(cloud2({{0, 0}, {1, 1}, {2, 2}})), Error);
  MveeOptions bad;
  bad.tolerance = 0.1;
  EXPECT_THROW(mvee(builtin_body("square"), bad), Error);
  MveeOptions capped;
  capped.max_iterations = 1;
  RngStream s(3, 0);
  const PointCloud pts = UniformSampler(builtin_body("disc")).sample(100, s).points;
  try {
    mvee(pts, capped);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonConvergence);
  }
}

TEST(RatioCheck, RejectsEllipsoidMissingAVertex) {
  const ConvexBody sq = cube_body(2, -1.0, 1.0);
  MveeCertificate c = mvee(sq);
  EXPECT_TRUE(ratio_check(sq, c));
  c.ellipsoid.shape *= 1.5;  // shrink: corners fall outside
  EXPECT_FALSE(ratio_check(sq, c));
  // Smooth bodies are checked along support directions.
  MveeCertificate d = mvee(builtin_body("disc"));
  EXPECT_TRUE(ratio_check(builtin_body("disc"), d));
  d.ellipsoid.shape *= 1.1;
  EXPECT_FALSE(ratio_check(builtin_body("disc"), d));
}

TEST(RatioCheck, RandomDiscPolygonsPass) {
  for (std::uint64_t k = 0; k < 1000; ++k) {
    RngStream s(4, k);
    const ConvexBody body = polygon::to_body(random_disc_polygon(s));
    const MveeCertificate c = mvee(body);
    ASSERT_TRUE(ratio_check(body, c)) << k;
    ASSERT_LE(c.ratio, 4.0 * std::pow(1.0 + c.tolerance, 2));
  }
}

TEST(Normalize, BallAndEllipsoid) {
  Point c(3);
  c << 1.0, -2.0, 0.5;
  const Normalization nb = normalize(ConvexBody::ball(c, 2.0));
  EXPECT_LE((nb.transform.linear() - Matrix::Identity(3, 3) / 2.0).norm(), 1e-15);
  EXPECT_LE((nb.transform.apply(c)).norm(), 1e-15);
  ASSERT_NE(nb.body.as<Ball>(), nullptr);
  EXPECT_EQ(nb.body.as<Ball>()->radius, 1.0);

  Matrix a(2, 2);
  a << 2.0, 0.5, 0.5, 1.0;
  const Normalization ne = normalize(ConvexBody::ellipsoid(Point::Zero(2), a));
  EXPECT_NEAR(std::abs(ne.transform.determinant()), std::sqrt(a.determinant()), 1e-14);
  ASSERT_NE(ne.body.as<Ball>(), nullptr);
  // T maps the boundary of E onto the unit circle.
  for (int k = 0; k < 16; ++k) {
    const double t = 2.0 * kPi * k / 16.0;
    Vector dir(2);
    dir << std::cos(t), std::sin(t);
    const Vector x = dir / std::sqrt(dir.dot(a * dir));
    EXPECT_NEAR(ne.transform.apply(x).norm(), 1.0, 1e-14);
  }
}

TEST(Normalize, SquareFitsUnitBall) {
  const ConvexBody sq = builtin_body("square");
  const Normalization n = normalize(sq);
  RngStream s(5, 0);
  for (int k = 0; k < 1000; ++k) {
    Vector u(2);
    u << s.uniform() - 0.5, s.uniform() - 0.5;
    EXPECT_LE(support(n.body, u.normalized()), 1.0001);
  }
  EXPECT_NEAR(volume(n.body), std::abs(n.transform.determinant()) * volume(sq), 1e-12);
  const double beta = unit_ball_volume(2);
  EXPECT_NEAR(std::abs(n.transform.determinant()) * n.enclosing_volume, beta, 1e-8 * beta);
}

TEST(Normalize, SupportBoundedOnRandomBodies) {
  RngStream s(6, 0);
  for (const char* name : {"cube3", "simplex3", "triangle", "simplex4"}) {
    const ConvexBody body = builtin_body(name);
    const Normalization n = normalize(body);
    for (int k = 0; k < 1000; ++k) {
      Vector u(body.dim());
      for (int i = 0; i < body.dim(); ++i) u[i] = s.uniform() - 0.5;
      ASSERT_LE(support(n.body, u.normalized()), 1.0 + 1e-7) << name;
    }
    const double beta = unit_ball_volume(body.dim());
    EXPECT_NEAR(std::abs(n.transform.determinant()) * n.enclosing_volume, beta, 1e-8 * beta);
  }
}

// Uniform samples of K pushed through T look like direct samples of T(K)
// along random linear functionals.
TEST(Normalize, PushforwardOfUniformIsUniform) {
  const ConvexBody body = builtin_body("simplex3");
  const Normalization n = normalize(body);
  RngStream a(7, 0);
  RngStream b(7, 1);
  const PointCloud pushed = n.transform.apply(sample_uniform(body, 5000, a));
  const PointCloud direct = sample_uniform(n.body, 5000, b);
  RngStream dirs(7, 2);
  for (int f = 0; f < 5; ++f) {
    Vector u(3);
    for (int i = 0; i < 3; ++i) u[i] = dirs.uniform() - 0.5;
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < pushed.size(); ++i) x.push_back(u.dot(as_vector(pushed[i])));
    for (std::size_t i = 0; i < direct.size(); ++i) y.push_back(u.dot(as_vector(direct[i])));
    EXPECT_GT(stats::ks_two_sample(x, y).p_value, 0.01) << f;
  }
}

TEST(ChainInequality, HoldsOnEveryReplicate) {
  for (const char* name : {"square", "triangle", "cube3", "disc"}) {
    const ChainResult r = chain_inequality_check(builtin_body(name), 50, 200, 8);
    EXPECT_EQ(r.violations, 0u) << name;
    EXPECT_LE(r.max_ratio, 1.0) << name;
  }
}
