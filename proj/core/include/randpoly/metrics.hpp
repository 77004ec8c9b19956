#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "randpoly/bodies.hpp"
#include "randpoly/polygon.hpp"
#include "randpoly/rng.hpp"

namespace randpoly {

/// Constants of the deviation bound for one dimension, built from the
/// Steiner coefficients of the unit ball.
struct ConstantsTable {
  int d = 0;
  double beta_d = 0.0;
  std::vector<double> L;  // L_1 .. L_d
  double alpha1 = 0.0;    // sum_j L_j 2^j
  double alpha2 = 0.0;    // sum_j L_j
  double alpha3 = 0.0;    // 1 + (3 alpha1 + alpha2) / beta_d
  double C2 = 0.0;        // alpha3 beta_d
};

ConstantsTable constants(int d);
nlohmann::json to_json(const ConstantsTable& table);

/// L_j(B_d) = beta_d binom(d, j), j = 1..d, from |B_d^lambda| = beta_d (1 + lambda)^d.
std::vector<double> steiner_coeffs_ball(int d);

/// Least-squares fit of |B_d^lambda \ B_d| = sum_j c_j lambda^j on
/// randomized quasi-Monte Carlo volume estimates. Each point is a Halton
/// point in [-1 - max lambda, 1 + max lambda]^{d-1} carrying the exact chord
/// length along the last axis; the points are split across `shifts`
/// independent Cranley-Patterson rotations and all lambdas share them.
struct SteinerFit {
  std::vector<double> lambdas;
  std::vector<double> shell_volume;     // estimate per lambda
  std::vector<double> shell_volume_se;  // across rotations
  std::vector<double> coefficients;     // c_1 .. c_d
};

SteinerFit fit_steiner_ball(int d, std::span<const double> lambdas, std::size_t points,
                            std::uint64_t seed, std::size_t shifts = 16);

/// Deterministic direction net on the unit sphere: the 2d signed axes,
/// then equally spaced angles (d = 2), a spherical Fibonacci lattice (d = 3)
/// or Halton points pushed through the normal quantile (d >= 4), rotated by
/// a seeded offset. `covering_radius` is the exact largest chord from a
/// sphere point to its nearest net point, read off the net's hull.
struct DirectionNet {
  int dim = 0;
  std::uint64_t seed = 0;
  PointCloud directions;
  double covering_radius = 0.0;
};

/// Cached per (d, m, seed); thread-safe.
std::shared_ptr<const DirectionNet> direction_net(int d, std::size_t m, std::uint64_t seed = 0);

struct HausdorffEstimate {
  double estimate = 0.0;
  /// The true distance lies in [estimate, estimate + error_bound].
  double error_bound = 0.0;
};

/// max over an m-direction net of |h_G(u) - h_G'(u)|. The bound is
/// (R_G + R_G') * covering radius, with R the circumradius about a common
/// center, since support functions centered there are R-Lipschitz.
HausdorffEstimate hausdorff(const ConvexBody& g, const ConvexBody& h, std::size_t m = 4096,
                            std::uint64_t seed = 0);

/// Exact |P symmetric-difference Q| for convex polygons.
double nikodym_2d(const polygon::Polygon& p, const polygon::Polygon& q);
double nikodym_2d(const ConvexBody& p, const ConvexBody& q);

struct McEstimate {
  double estimate = 0.0;
  double ci95 = 0.0;  // half-width
};

/// |B| times the fraction of n uniform points of the common bounding box B
/// lying in exactly one body.
McEstimate nikodym_mc(const ConvexBody& g, const ConvexBody& h, RngStream& stream, std::size_t n);

/// |P^lambda| = area + perimeter lambda + pi lambda^2.
double neighborhood_volume_2d(const polygon::Polygon& p, double lambda);

}  // namespace randpoly
