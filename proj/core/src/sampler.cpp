#include "randpoly/sampler.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "randpoly/ellipsoid.hpp"
#include "randpoly/error.hpp"

namespace randpoly {
namespace {

constexpr double kMinAcceptance = 1e-6;
constexpr int kMaxSampleDim = 64;

const VPolytope* polytope_of(const ConvexBody& body) {
  if (const auto* v = body.as<VPolytope>()) return v;
  if (const auto* h = body.as<HPolytope>()) return &h->vertex_form();
  return nullptr;
}

bool is_axis_box(const PointCloud& verts, const Box& box) {
  const int d = verts.dim();
  if (verts.size() != (std::size_t{1} << d)) return false;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (int k = 0; k < d; ++k) {
      const double x = verts[i][static_cast<std::size_t>(k)];
      if (x != box.lower[k] && x != box.upper[k]) return false;
    }
  }
  return true;
}

// Draws until the exponential variate is strictly positive so the Dirichlet
// normalizer never vanishes.
double positive_exponential(RngStream& stream) {
  for (;;) {
    const double u = stream.uniform();
    if (u > 0.0) return -std::log(u);
  }
}

}  // namespace

UniformSampler::UniformSampler(ConvexBody body) : body_(std::move(body)), dim_(body_.dim()) {
  const int d = dim_;
  if (d > kMaxSampleDim) fail(ErrorCode::kUnsupported, "sampling supports d <= 64");
  const double body_volume = volume(body_);
  if (const auto* b = body_.as<Ball>()) {
    method_ = SamplerMethod::kBall;
    center_ = b->center;
    linear_ = Matrix::Identity(d, d) * b->radius;
    envelope_volume_ = body_volume;
    return;
  }
  if (const auto* e = body_.as<Ellipsoid>()) {
    method_ = SamplerMethod::kEllipsoid;
    const AffineMap to_ball = unit_ball_map(*e);
    center_ = e->center;
    linear_ = to_ball.linear().inverse();
    envelope_volume_ = body_volume;
    return;
  }

  const VPolytope& poly = *polytope_of(body_);
  const PointCloud& verts = poly.vertices();
  const Box box = bounding_box(body_);
  if (verts.size() == static_cast<std::size_t>(d) + 1) {
    method_ = SamplerMethod::kSimplex;
    vertices_.resize(d, d + 1);
    for (int j = 0; j <= d; ++j) vertices_.col(j) = as_vector(verts[static_cast<std::size_t>(j)]);
    envelope_volume_ = body_volume;
    return;
  }
  if (is_axis_box(verts, box)) {
    method_ = SamplerMethod::kBox;
    lower_ = box.lower;
    upper_ = box.upper;
    envelope_volume_ = body_volume;
    return;
  }

  const MveeCertificate cert = mvee(body_);
  const double mvee_volume = cert.ratio * body_volume;
  if (mvee_volume <= box.volume()) {
    method_ = SamplerMethod::kRejectionEllipsoid;
    center_ = cert.ellipsoid.center;
    linear_ = unit_ball_map(cert.ellipsoid).linear().inverse();
    envelope_volume_ = mvee_volume;
  } else {
    method_ = SamplerMethod::kRejectionBox;
    lower_ = box.lower;
    upper_ = box.upper;
    envelope_volume_ = box.volume();
  }
  expected_acceptance_ = body_volume / envelope_volume_;
  if (expected_acceptance_ < kMinAcceptance) {
    fail(ErrorCode::kEnvelopeTooLoose, "rejection envelope too loose for this body");
  }
}

void UniformSampler::propose_unit_ball(RngStream& stream, double* y) const {
  const int d = dim_;
  if (d == 2) {
    const double theta = 2.0 * std::numbers::pi * stream.uniform();
    const double r = std::sqrt(stream.uniform());
    y[0] = r * std::cos(theta);
    y[1] = r * std::sin(theta);
    return;
  }
  std::normal_distribution<double> normal;
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (int k = 0; k < d; ++k) {
      y[k] = normal(stream);
      norm2 += y[k] * y[k];
    }
  } while (norm2 == 0.0);
  const double scale = std::pow(stream.uniform(), 1.0 / d) / std::sqrt(norm2);
  for (int k = 0; k < d; ++k) y[k] *= scale;
}

void UniformSampler::propose(RngStream& stream, double* x) const {
  const int d = dim_;
  switch (method_) {
    case SamplerMethod::kBall:
    case SamplerMethod::kEllipsoid:
    case SamplerMethod::kRejectionEllipsoid: {
      double y[kMaxSampleDim];
      Eigen::Map<Vector> out(x, d);
      propose_unit_ball(stream, y);
      out = center_ + linear_ * Eigen::Map<const Vector>(y, d);
      return;
    }
    case SamplerMethod::kSimplex: {
      double w[kMaxHullDim + 1];
      double total = 0.0;
      for (int j = 0; j <= d; ++j) total += (w[j] = positive_exponential(stream));
      Eigen::Map<Vector> out(x, d);
      out = vertices_ * (Eigen::Map<const Vector>(w, d + 1) / total);
      return;
    }
    case SamplerMethod::kBox:
    case SamplerMethod::kRejectionBox:
      for (int k = 0; k < d; ++k) x[k] = lower_[k] + (upper_[k] - lower_[k]) * stream.uniform();
      return;
  }
}

std::uint64_t UniformSampler::sample_into(std::size_t n, RngStream& stream, PointCloud& out) const {
  if (out.dim() != dim_) fail(ErrorCode::kDimensionMismatch, "output cloud has the wrong dimension");
  std::vector<double> x(static_cast<std::size_t>(dim_));
  std::uint64_t proposals = 0;
  out.reserve(out.size() + n);
  for (std::size_t i = 0; i < n;) {
    propose(stream, x.data());
    ++proposals;
    if (!contains(body_, std::span<const double>(x))) continue;
    out.push_back(std::span<const double>(x));
    ++i;
  }
  return proposals;
}

SampleBatch UniformSampler::sample(std::size_t n, RngStream& stream) const {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "sample size must be at least 1");
  SampleBatch batch{PointCloud(dim_), 1.0, 0};
  batch.proposals = sample_into(n, stream, batch.points);
  batch.acceptance_rate = static_cast<double>(n) / static_cast<double>(batch.proposals);
  return batch;
}

PointCloud sample_uniform(const ConvexBody& body, std::size_t n, RngStream& stream) {
  return UniformSampler(body).sample(n, stream).points;
}

}  // namespace randpoly
