#pragma once

#include <array>
#include <span>
#include <vector>

#include "randpoly/types.hpp"

// Geometric sign predicates. Every sign is evaluated first in floating point
// with a forward error bound; only when the bound cannot certify the sign is
// the determinant recomputed in exact rational arithmetic. Inputs are doubles,
// which are exact dyadic rationals, so the fallback is exact.
namespace randpoly::predicates {

using PointRef = std::span<const double>;

/// Hyperplane spanned by d points of R^d, prepared for repeated side tests.
///
/// side(q) is the sign of det[p1 - p0, ..., p_{d-1} - p0, q - p0], negated
/// after flip(). The cofactors of the last row and their absolute-value
/// permanents are cached, so a filtered query costs O(d).
class Hyperplane {
 public:
  Hyperplane() = default;
  explicit Hyperplane(std::span<const PointRef> points);

  int dim() const noexcept { return dim_; }
  int side(PointRef q) const;
  void flip() noexcept { flipped_ = !flipped_; }
  bool flipped() const noexcept { return flipped_; }

  /// Floating-point unit normal pointing to the positive side, and the
  /// matching offset (normal . x = offset on the hyperplane).
  Vector unit_normal() const;
  double offset() const;

  PointRef point(int i) const {
    return {points_.data() + static_cast<std::size_t>(i * dim_), static_cast<std::size_t>(dim_)};
  }

  /// True iff the d defining points are affinely independent (exact).
  bool nondegenerate() const;

 private:
  int exact_side(PointRef q) const;

  int dim_ = 0;
  bool flipped_ = false;
  double gamma_ = 0.0;
  std::array<double, kMaxHullDim * kMaxHullDim> points_{};
  std::array<double, kMaxHullDim> cofactor_{};
  std::array<double, kMaxHullDim> permanent_{};
};

/// Sign of det[p1 - p0, ..., p_{d-1} - p0, q - p0].
int orientation(std::span<const PointRef> simplex, PointRef q);

/// Dimension of the affine hull of the points (exact); -1 when empty.
int affine_rank(std::span<const PointRef> points);

/// Exact sign of a . x - b.
int affine_sign(PointRef a, PointRef x, double b);

/// Exact rank of the set of normal vectors of the given hyperplanes.
int normal_rank(std::span<const Hyperplane* const> planes);

}  // namespace randpoly::predicates
