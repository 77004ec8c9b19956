#pragma once

#include <cstddef>
#include <cstdint>

#include "randpoly/bodies.hpp"
#include "randpoly/rng.hpp"

namespace randpoly {

enum class SamplerMethod {
  kBall,
  kEllipsoid,
  kSimplex,
  kBox,
  kRejectionEllipsoid,
  kRejectionBox,
};

struct SampleBatch {
  PointCloud points;
  /// Accepted / proposed; 1 for the direct methods.
  double acceptance_rate = 1.0;
  std::uint64_t proposals = 0;
};

/// Uniform sampler for one body. The proposal method is chosen once at
/// construction: closed forms for balls, ellipsoids, simplices and axis
/// boxes, otherwise rejection from the MVEE or the bounding box, whichever
/// has the smaller volume. Every returned point satisfies contains(body, p).
/// Immutable after construction, so one sampler may serve many threads.
class UniformSampler {
 public:
  /// Throws kEnvelopeTooLoose when the envelope would accept fewer than
  /// 1e-6 of its proposals.
  explicit UniformSampler(ConvexBody body);

  const ConvexBody& body() const noexcept { return body_; }
  SamplerMethod method() const noexcept { return method_; }
  double envelope_volume() const noexcept { return envelope_volume_; }
  /// volume(body) / volume(envelope).
  double expected_acceptance() const noexcept { return expected_acceptance_; }

  SampleBatch sample(std::size_t n, RngStream& stream) const;
  /// Appends n points to `out` and returns the number of proposals drawn.
  std::uint64_t sample_into(std::size_t n, RngStream& stream, PointCloud& out) const;

 private:
  void propose(RngStream& stream, double* x) const;
  void propose_unit_ball(RngStream& stream, double* y) const;

  ConvexBody body_;
  SamplerMethod method_ = SamplerMethod::kBall;
  int dim_ = 0;
  Vector center_;
  Matrix linear_;      // ellipsoid envelope: x = center + linear * y, y in B_d
  Matrix vertices_;    // simplex: d x (d+1)
  Vector lower_;
  Vector upper_;
  double envelope_volume_ = 0.0;
  double expected_acceptance_ = 1.0;
};

/// n i.i.d. uniform points of `body`.
PointCloud sample_uniform(const ConvexBody& body, std::size_t n, RngStream& stream);

}  // namespace randpoly
