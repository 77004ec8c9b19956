#include <cmath>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "randpoly/bodies.hpp"
#include "randpoly/body_io.hpp"
#include "randpoly/error.hpp"
#include "randpoly/rng.hpp"

using namespace randpoly;

namespace {

constexpr double kPi = std::numbers::pi;

Point pt(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

ConvexBody square_pm1() { return cube_body(2, -1.0, 1.0); }

Vector random_unit(RngStream& s, int d) {
  Vector u(d);
  for (int i = 0; i < d; ++i) u[i] = s.uniform() - 0.5;
  return u.normalized();
}

std::vector<ConvexBody> sample_bodies() {
  Matrix shape(3, 3);
  shape << 2.0, 0.3, 0.0, 0.3, 1.0, 0.1, 0.0, 0.1, 0.5;
  std::vector<Halfspace> hs;
  for (int i = 0; i < 3; ++i) {
    hs.push_back({Vector::Unit(3, i), 1.0});
    hs.push_back({-Vector::Unit(3, i), 0.5});
  }
  return {builtin_body("disc"),
          ConvexBody::ball(pt({1.0, -2.0, 0.5}), 0.7),
          ConvexBody::ellipsoid(pt({0.1, 0.2, 0.3}), shape),
          builtin_body("cube3"),
          builtin_body("simplex3"),
          builtin_body("ellipse(2,0.5)"),
          ConvexBody::hpolytope(hs)};
}

}  // namespace

TEST(Volume, ClosedForms) {
  EXPECT_DOUBLE_EQ(unit_ball_volume(2), kPi);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * kPi / 3.0, 1e-15);
  EXPECT_NEAR(volume(builtin_body("disc")), kPi, 1e-15);
  for (int d = 2; d <= 6; ++d) {
    EXPECT_NEAR(volume(standard_simplex(d)), 1.0 / std::tgamma(d + 1.0), 1e-14) << d;
    EXPECT_NEAR(volume(cube_body(d)), 1.0, 1e-12) << d;
  }
  Matrix a = Matrix::Identity(2, 2);
  a(1, 1) = 0.25;
  EXPECT_NEAR(volume(ConvexBody::ellipsoid(Point::Zero(2), a)), 2.0 * kPi, 1e-14);
}

TEST(Contains, Examples) {
  const ConvexBody ball = builtin_body("ball3");
  EXPECT_TRUE(contains(ball, pt({0, 0, 0})));
  EXPECT_FALSE(contains(ball, pt({2, 0, 0})));
  const ConvexBody sq = builtin_body("square");
  EXPECT_TRUE(contains(sq, pt({0.5, 0.5})));
  EXPECT_FALSE(contains(sq, pt({1.0001, 0.5})));
  EXPECT_TRUE(contains(sq, pt({1.0, 0.5})));
  EXPECT_FALSE(contains(sq, pt({std::nextafter(1.0, 2.0), 0.5})));
  EXPECT_THROW(contains(sq, pt({0.5, 0.5, 0.5})), Error);
}

TEST(Contains, HPolytopeIsExactOnBoundary) {
  std::vector<Halfspace> hs{{pt({1, 0}), 1.0}, {pt({-1, 0}), 0.0}, {pt({0, 1}), 1.0}, {pt({0, -1}), 0.0}};
  const ConvexBody h = ConvexBody::hpolytope(hs);
  EXPECT_TRUE(contains(h, pt({1.0, 0.3})));
  EXPECT_FALSE(contains(h, pt({std::nextafter(1.0, 2.0), 0.3})));
  EXPECT_NEAR(volume(h), 1.0, 1e-12);
}

TEST(Support, Examples) {
  RngStream s(3, 0);
  const ConvexBody ball = builtin_body("ball3");
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(support(ball, random_unit(s, 3)), 1.0, 1e-15);
  EXPECT_NEAR(support(square_pm1(), pt({1, 0})), 1.0, 1e-15);
  EXPECT_NEAR(support(square_pm1(), pt({std::sqrt(0.5), std::sqrt(0.5)})), std::sqrt(2.0), 1e-15);
  Matrix a = Matrix::Identity(2, 2);
  a(1, 1) = 4.0;
  EXPECT_NEAR(support(ConvexBody::ellipsoid(Point::Zero(2), a), pt({0, 1})), 0.5, 1e-15);
  EXPECT_THROW(support(ball, pt({1, 1, 0})), Error);
}

TEST(Support, PositivelyHomogeneous) {
  RngStream s(4, 0);
  for (const ConvexBody& body : sample_bodies()) {
    const AffineMap scale = AffineMap::scaling(body.dim(), 2.5);
    const ConvexBody scaled = affine_image(scale, body);
    for (int i = 0; i < 20; ++i) {
      const Vector u = random_unit(s, body.dim());
      EXPECT_NEAR(support(scaled, u), 2.5 * support(body, u), 1e-12 * (1.0 + std::abs(support(body, u))))
          << body.kind();
    }
  }
}

TEST(AffineImage, VolumeScalesByDeterminant) {
  RngStream s(5, 0);
  for (const ConvexBody& body : sample_bodies()) {
    const int d = body.dim();
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = s.uniform() - 0.5 + (i == j ? 1.5 : 0.0);
    Vector off(d);
    for (int i = 0; i < d; ++i) off[i] = s.uniform();
    const AffineMap t(m, off);
    const double expect = std::abs(t.determinant()) * volume(body);
    EXPECT_NEAR(volume(affine_image(t, body)), expect, 1e-9 * expect) << body.kind();
  }
}

TEST(AffineImage, Examples) {
  const ConvexBody disc = builtin_body("disc");
  const ConvexBody big = affine_image(AffineMap::scaling(2, 2.0), disc);
  ASSERT_NE(big.as<Ball>(), nullptr);
  EXPECT_DOUBLE_EQ(big.as<Ball>()->radius, 2.0);
  EXPECT_NEAR(volume(big), 4.0 * kPi, 1e-14);

  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 2.0;
  m(1, 1) = 0.5;
  const ConvexBody rect = affine_image(AffineMap(m, Vector::Zero(2)), builtin_body("square"));
  EXPECT_NEAR(volume(rect), 1.0, 1e-12);
  EXPECT_EQ(affine_image(AffineMap(m, Vector::Zero(2)), disc).kind(), "ellipsoid");

  const ConvexBody same = affine_image(AffineMap::identity(3), builtin_body("cube3"));
  EXPECT_EQ(same.as<VPolytope>()->vertices(), builtin_body("cube3").as<VPolytope>()->vertices());
  EXPECT_THROW(AffineMap(Matrix::Zero(2, 2), Vector::Zero(2)), Error);
}

TEST(AffineMap, InverseRoundTrip) {
  Matrix m(3, 3);
  m << 2, 1, 0, 0, 1, 3, 1, 0, 1;
  const AffineMap t(m, pt({1, -1, 2}));
  const AffineMap id = t.compose(t.inverse());
  const PointCloud verts = vertex_points(standard_simplex(3));
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const Point p = verts.point(i);
    EXPECT_LE((t.inverse().apply(t.apply(p)) - p).norm(), 1e-12 * (1.0 + p.norm()));
    EXPECT_LE((id.apply(p) - p).norm(), 1e-12 * (1.0 + p.norm()));
  }
}

TEST(BoundingBox, Examples) {
  const Box b = bounding_box(builtin_body("ball3"));
  EXPECT_TRUE(b.lower.isApprox(Vector::Constant(3, -1.0)));
  EXPECT_TRUE(b.upper.isApprox(Vector::Constant(3, 1.0)));
  const Box t = bounding_box(builtin_body("triangle"));
  EXPECT_TRUE(t.lower.isApprox(Vector::Zero(2)) || t.lower.norm() < 1e-15);
  EXPECT_TRUE(t.upper.isApprox(Vector::Ones(2)));
  Matrix a(2, 2);
  a << 2.0, 0.5, 0.5, 1.0;
  const Box e = bounding_box(ConvexBody::ellipsoid(pt({1, 2}), a));
  const Matrix inv = a.inverse();
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(e.upper[i] - (i == 0 ? 1.0 : 2.0), std::sqrt(inv(i, i)), 1e-12);
    EXPECT_NEAR((i == 0 ? 1.0 : 2.0) - e.lower[i], std::sqrt(inv(i, i)), 1e-12);
  }
}

TEST(BoundingBox, HitRateMatchesVolumeRatio) {
  RngStream s(6, 0);
  for (const ConvexBody& body : sample_bodies()) {
    const Box box = bounding_box(body);
    const int d = body.dim();
    const int n = 1000000;
    int hits = 0;
    Point x(d);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) x[k] = box.lower[k] + (box.upper[k] - box.lower[k]) * s.uniform();
      hits += contains(body, x);
    }
    const double p = volume(body) / box.volume();
    EXPECT_NEAR(static_cast<double>(hits) / n, p, 4.0 * std::sqrt(p * (1 - p) / n)) << body.kind();
  }
}

TEST(Contains, AgreesWithSupportTest) {
  RngStream s(7, 0);
  for (const ConvexBody& body : sample_bodies()) {
    const int d = body.dim();
    const Box box = bounding_box(body);
    std::vector<Vector> dirs;
    for (int k = 0; k < 1000; ++k) dirs.push_back(random_unit(s, d));
    for (int i = 0; i < 200; ++i) {
      Point x(d);
      for (int k = 0; k < d; ++k) x[k] = box.lower[k] - 0.1 + (box.upper[k] - box.lower[k] + 0.2) * s.uniform();
      bool violated = false;
      for (const Vector& u : dirs) violated = violated || u.dot(x) > support(body, u) + 1e-12;
      if (violated) {
        EXPECT_FALSE(contains(body, x)) << body.kind();
      }
      if (contains(body, x)) {
        EXPECT_FALSE(violated) << body.kind();
      }
    }
  }
}

TEST(Construction, RejectsDegenerateAndUnbounded) {
  EXPECT_THROW(ConvexBody::ball(Point::Zero(2), 0.0), Error);
  EXPECT_THROW(ConvexBody::ball(Point::Zero(1), 1.0), Error);
  EXPECT_THROW(ConvexBody::ellipsoid(Point::Zero(2), -Matrix::Identity(2, 2)), Error);
  PointCloud flat(2);
  for (double x : {0.0, 1.0, 2.0}) flat.push_back(pt({x, x}));
  try {
    ConvexBody::vpolytope(flat);
    FAIL() << "expected degenerate body";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateBody);
  }
  std::vector<Halfspace> halfplane{{pt({1, 0}), 1.0}, {pt({-1, 0}), 1.0}, {pt({0, 1}), 1.0}};
  try {
    ConvexBody::hpolytope(halfplane);
    FAIL() << "expected unbounded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnbounded);
  }
  std::vector<Halfspace> big;
  for (int i = 0; i < 7; ++i) {
    big.push_back({Vector::Unit(7, i), 1.0});
    big.push_back({-Vector::Unit(7, i), 1.0});
  }
  try {
    ConvexBody::hpolytope(big);
    FAIL() << "expected unsupported";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupported);
  }
}

TEST(VPolytope, DropsInteriorPoints) {
  PointCloud pts(2);
  for (const auto& p : {pt({0, 0}), pt({1, 0}), pt({0.5, 0.5}), pt({1, 1}), pt({0, 1}), pt({0.5, 0})}) pts.push_back(p);
  const ConvexBody sq = ConvexBody::vpolytope(pts);
  EXPECT_EQ(sq.as<VPolytope>()->vertices().size(), 4u);
  EXPECT_NEAR(volume(sq), 1.0, 1e-15);
}

TEST(BodyIo, RoundTripIsBitExact) {
  for (const ConvexBody& body : sample_bodies()) {
    const auto doc = body_to_json(body);
    const ConvexBody back = body_from_json(nlohmann::json::parse(doc.dump()));
    EXPECT_EQ(body_to_json(back).dump(), doc.dump()) << body.kind();
    EXPECT_EQ(volume(back), volume(body));
  }
}

TEST(BodyIo, FileAndBuiltinAgree) {
  const auto path = std::filesystem::temp_directory_path() / "randpoly_square_test.json";
  save_body(builtin_body("square"), path);
  const ConvexBody loaded = resolve_body(path.string());
  EXPECT_EQ(body_to_json(loaded), body_to_json(builtin_body("square")));
  std::filesystem::remove(path);
  EXPECT_THROW(resolve_body("definitely_missing.json"), Error);
  EXPECT_THROW(body_from_json(nlohmann::json{{"dim", 2}, {"type", "blob"}}), Error);
}

TEST(Builtins, Names) {
  EXPECT_EQ(builtin_body("disc").dim(), 2);
  EXPECT_EQ(builtin_body("ball3").dim(), 3);
  EXPECT_EQ(builtin_body("simplex5").dim(), 5);
  EXPECT_NEAR(volume(builtin_body("ellipse(2,0.5)")), kPi, 1e-14);
  EXPECT_NEAR(volume(builtin_body("triangle")), 0.5, 1e-15);
  EXPECT_THROW(builtin_body("dodecahedron"), Error);
}
