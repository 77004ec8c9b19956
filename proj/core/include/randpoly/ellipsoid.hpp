#pragma once

#include <cstddef>
#include <vector>

#include "randpoly/bodies.hpp"

namespace randpoly {

struct MveeOptions {
  double tolerance = 1e-7;
  std::size_t max_iterations = 1'000'000;
  /// Keep the log-det objective of every iterate in the certificate.
  bool record_objective = false;
};

/// Enclosing ellipsoid E with its volume ratio |E| / |K|. Every point used
/// to build it satisfies (x - c)^T A (x - c) <= 1.
struct MveeCertificate {
  Ellipsoid ellipsoid;
  double ratio = 0.0;
  double tolerance = 0.0;
  std::size_t iterations = 0;
  std::vector<double> objective;
};

/// Minimum-volume enclosing ellipsoid of a full-dimensional point set by
/// Khachiyan's barycentric ascent with Todd-Yildirim away steps, run until
/// max_j q_j^T X^{-1} q_j <= (1 + tol)(d + 1). Ties pick the lowest index.
/// The ratio is taken against the volume of conv(points).
MveeCertificate mvee(const PointCloud& points, const MveeOptions& options = {});

/// MVEE of a body: polytopes through their vertices; balls and ellipsoids
/// are their own MVEE.
MveeCertificate mvee(const ConvexBody& body, const MveeOptions& options = {});

/// True iff |E| / |K| <= d^d (1 + tol)^d and K lies in (1 + tol) E, the
/// latter checked on vertices (polytopes) or on 2d + 256 support directions.
bool ratio_check(const ConvexBody& body, const MveeCertificate& cert);

/// Affine map sending {(x - c)^T A (x - c) <= 1} onto the unit ball:
/// x -> L^T (x - c) with A = L L^T.
AffineMap unit_ball_map(const Ellipsoid& e);

struct Normalization {
  AffineMap transform;
  ConvexBody body;       // T(K), inside the unit ball up to the MVEE tolerance
  Ellipsoid enclosing;   // E with T(E) = B_d
  double enclosing_volume = 0.0;
};

Normalization normalize(const ConvexBody& body, double tolerance = 1e-7);

}  // namespace randpoly
