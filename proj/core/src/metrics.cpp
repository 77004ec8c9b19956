#include "randpoly/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "randpoly/error.hpp"
#include "randpoly/hull.hpp"
#include "randpoly/stats.hpp"

namespace randpoly {
namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_dim(int d) {
  if (d < 2) fail(ErrorCode::kInvalidArgument, "dimension must be at least 2");
}

Box common_box(const ConvexBody& g, const ConvexBody& h) {
  const Box a = bounding_box(g);
  const Box b = bounding_box(h);
  return {a.lower.cwiseMin(b.lower), a.upper.cwiseMax(b.upper)};
}

// max_{x in K} |x - c|
double circumradius(const ConvexBody& body, const Vector& c) {
  if (const auto* b = body.as<Ball>()) return (b->center - c).norm() + b->radius;
  if (const auto* e = body.as<Ellipsoid>()) {
    const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(e->shape).eigenvalues().minCoeff();
    return (e->center - c).norm() + 1.0 / std::sqrt(min_eig);
  }
  const PointCloud verts = vertex_points(body);
  double r = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i) r = std::max(r, (as_vector(verts[i]) - c).norm());
  return r;
}

DirectionNet build_net(int d, std::size_t m, std::uint64_t seed) {
  DirectionNet net;
  net.dim = d;
  net.seed = seed;
  net.directions = PointCloud(d);
  net.directions.reserve(m);
  for (int i = 0; i < d; ++i) {
    net.directions.push_back(Point(Vector::Unit(d, i)));
    net.directions.push_back(Point(-Vector::Unit(d, i)));
  }
  const std::size_t extra = m - static_cast<std::size_t>(2 * d);
  RngStream stream(seed, 0);
  Vector u(d);
  if (d == 2) {
    const double offset = stream.uniform();
    for (std::size_t k = 0; k < extra; ++k) {
      const double t = 2.0 * std::numbers::pi * (static_cast<double>(k) + offset) / static_cast<double>(extra);
      u << std::cos(t), std::sin(t);
      net.directions.push_back(u);
    }
  } else if (d == 3) {
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    const double offset = stream.uniform();
    for (std::size_t k = 0; k < extra; ++k) {
      const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(extra);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = 2.0 * std::numbers::pi * (static_cast<double>(k) / golden + offset);
      u << r * std::cos(phi), r * std::sin(phi), z;
      net.directions.push_back(u);
    }
  } else {
    std::vector<double> shift(static_cast<std::size_t>(d));
    for (double& s : shift) s = stream.uniform();
    for (std::size_t k = 0; k < extra; ++k) {
      for (int i = 0; i < d; ++i) {
        double x = stats::radical_inverse(k + 1, stats::prime(i)) + shift[static_cast<std::size_t>(i)];
        x -= std::floor(x);
        x = std::clamp(x, 1e-12, 1.0 - 1e-12);
        u[i] = stats::normal_quantile(x);
      }
      net.directions.push_back(Point(u.normalized()));
    }
  }

  const HullResult hull = convex_hull(net.directions);
  double worst = 0.0;
  for (const HullFacet& f : hull.facets) {
    if (f.offset <= 0.0) {
      worst = 2.0;
      break;
    }
    worst = std::max(worst, std::sqrt(2.0 * (1.0 - std::min(1.0, f.offset))));
  }
  net.covering_radius = worst;
  return net;
}

}  // namespace

ConstantsTable constants(int d) {
  check_dim(d);
  ConstantsTable t;
  t.d = d;
  t.beta_d = unit_ball_volume(d);
  t.L = steiner_coeffs_ball(d);
  for (int j = 1; j <= d; ++j) {
    t.alpha1 += t.L[static_cast<std::size_t>(j - 1)] * std::ldexp(1.0, j);
    t.alpha2 += t.L[static_cast<std::size_t>(j - 1)];
  }
  t.alpha3 = 1.0 + (3.0 * t.alpha1 + t.alpha2) / t.beta_d;
  t.C2 = t.alpha3 * t.beta_d;
  return t;
}

nlohmann::json to_json(const ConstantsTable& t) {
  return {{"d", t.d},           {"beta_d", t.beta_d}, {"L", t.L}, {"alpha1", t.alpha1},
          {"alpha2", t.alpha2}, {"alpha3", t.alpha3}, {"C2", t.C2}};
}

std::vector<double> steiner_coeffs_ball(int d) {
  check_dim(d);
  const double beta = unit_ball_volume(d);
  std::vector<double> l;
  for (int j = 1; j <= d; ++j) l.push_back(beta * binomial(d, j));
  return l;
}

SteinerFit fit_steiner_ball(int d, std::span<const double> lambdas, std::size_t points,
                            std::uint64_t seed, std::size_t shifts) {
  check_dim(d);
  if (d > 32) fail(ErrorCode::kUnsupported, "Steiner fit supports d <= 32");
  if (lambdas.size() < static_cast<std::size_t>(d)) {
    fail(ErrorCode::kInvalidArgument, "Steiner fit needs at least d lambda values");
  }
  if (shifts < 2 || points < shifts) fail(ErrorCode::kInvalidArgument, "Steiner fit needs two or more rotations");
  double lmax = 0.0;
  for (double l : lambdas) {
    if (!(l > 0.0)) fail(ErrorCode::kInvalidArgument, "lambda must be positive");
    lmax = std::max(lmax, l);
  }
  const double half = 1.0 + lmax;
  // Conditional Monte Carlo: each point fixes the first d - 1 coordinates and
  // the last axis is integrated exactly as a chord length. The chord is
  // continuous in the point, unlike the membership indicator, so the
  // quasi-random points converge much faster.
  const int free_dims = d - 1;
  const double face = std::pow(2.0 * half, free_dims);
  const std::size_t per_shift = points / shifts;
  const std::size_t nl = lambdas.size();
  std::vector<double> sq_radius(nl);
  for (std::size_t k = 0; k < nl; ++k) sq_radius[k] = (1.0 + lambdas[k]) * (1.0 + lambdas[k]);
  const auto chord = [](double sq_r, double r2) { return r2 < sq_r ? 2.0 * std::sqrt(sq_r - r2) : 0.0; };

  std::vector<std::vector<double>> per(nl, std::vector<double>(shifts));
  std::vector<double> shift(static_cast<std::size_t>(free_dims));
  std::vector<double> sums(nl);
  for (std::size_t s = 0; s < shifts; ++s) {
    RngStream stream(seed, s);
    for (double& v : shift) v = stream.uniform();
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t i = 0; i < per_shift; ++i) {
      double r2 = 0.0;
      for (int c = 0; c < free_dims; ++c) {
        double u = stats::radical_inverse(i + 1, stats::prime(c)) + shift[static_cast<std::size_t>(c)];
        u -= std::floor(u);
        const double coord = (2.0 * u - 1.0) * half;
        r2 += coord * coord;
      }
      const double inner = chord(1.0, r2);
      for (std::size_t k = 0; k < nl; ++k) sums[k] += chord(sq_radius[k], r2) - inner;
    }
    for (std::size_t k = 0; k < nl; ++k) per[k][s] = face * sums[k] / static_cast<double>(per_shift);
  }

  SteinerFit fit;
  fit.lambdas.assign(lambdas.begin(), lambdas.end());
  Matrix design(static_cast<Eigen::Index>(nl), d);
  Vector rhs(static_cast<Eigen::Index>(nl));
  for (std::size_t k = 0; k < nl; ++k) {
    const stats::MeanSe m = stats::mean_se(per[k]);
    fit.shell_volume.push_back(m.mean);
    fit.shell_volume_se.push_back(m.se);
    rhs[static_cast<Eigen::Index>(k)] = m.mean;
    for (int j = 0; j < d; ++j) design(static_cast<Eigen::Index>(k), j) = std::pow(lambdas[k], j + 1);
  }
  const Vector coef = design.colPivHouseholderQr().solve(rhs);
  fit.coefficients.assign(coef.data(), coef.data() + coef.size());
  return fit;
}

std::shared_ptr<const DirectionNet> direction_net(int d, std::size_t m, std::uint64_t seed) {
  check_dim(d);
  if (d > kMaxHullDim) fail(ErrorCode::kUnsupported, "direction nets support d <= 6");
  if (m < static_cast<std::size_t>(2 * d) + 1) fail(ErrorCode::kInvalidArgument, "direction net needs m > 2d");
  static std::mutex mutex;
  static std::map<std::tuple<int, std::size_t, std::uint64_t>, std::shared_ptr<const DirectionNet>> cache;
  const auto key = std::make_tuple(d, m, seed);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto net = std::make_shared<const DirectionNet>(build_net(d, m, seed));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(net)).first->second;
}

HausdorffEstimate hausdorff(const ConvexBody& g, const ConvexBody& h, std::size_t m, std::uint64_t seed) {
  if (g.dim() != h.dim()) fail(ErrorCode::kDimensionMismatch, "bodies differ in dimension");
  const int d = g.dim();
  const auto net = direction_net(d, m, seed);
  HausdorffEstimate out;
  for (std::size_t i = 0; i < net->directions.size(); ++i) {
    const Vector u = as_vector(net->directions[i]);
    out.estimate = std::max(out.estimate, std::abs(support(g, u) - support(h, u)));
  }
  const Box box = common_box(g, h);
  const Vector c = 0.5 * (box.lower + box.upper);
  out.error_bound = (circumradius(g, c) + circumradius(h, c)) * net->covering_radius;
  return out;
}

double nikodym_2d(const polygon::Polygon& p, const polygon::Polygon& q) {
  const polygon::Polygon a = polygon::canonical(p);
  const polygon::Polygon b = polygon::canonical(q);
  const double overlap = polygon::area(polygon::intersect(a, b));
  return std::max(0.0, polygon::area(a) + polygon::area(b) - 2.0 * overlap);
}

double nikodym_2d(const ConvexBody& p, const ConvexBody& q) {
  return nikodym_2d(polygon::from_body(p), polygon::from_body(q));
}

McEstimate nikodym_mc(const ConvexBody& g, const ConvexBody& h, RngStream& stream, std::size_t n) {
  if (g.dim() != h.dim()) fail(ErrorCode::kDimensionMismatch, "bodies differ in dimension");
  if (n == 0) fail(ErrorCode::kInvalidArgument, "sample size must be positive");
  const Box box = common_box(g, h);
  const int d = g.dim();
  std::vector<double> x(static_cast<std::size_t>(d));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      x[static_cast<std::size_t>(k)] = box.lower[k] + (box.upper[k] - box.lower[k]) * stream.uniform();
    }
    hits += contains(g, std::span<const double>(x)) != contains(h, std::span<const double>(x));
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  const double vol = box.volume();
  return {vol * p, stats::kZ95 * vol * std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

double neighborhood_volume_2d(const polygon::Polygon& p, double lambda) {
  if (!(lambda >= 0.0)) fail(ErrorCode::kInvalidArgument, "lambda must be nonnegative");
  const polygon::Polygon c = polygon::canonical(p);
  return polygon::area(c) + polygon::perimeter(c) * lambda + std::numbers::pi * lambda * lambda;
}

}  // namespace randpoly
