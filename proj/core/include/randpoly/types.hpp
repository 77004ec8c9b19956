#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace randpoly {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Point = Eigen::VectorXd;

/// Largest dimension supported by the exact hull and H/V conversions.
inline constexpr int kMaxHullDim = 6;

/// Dense row-major set of points in R^d. Bulk sample storage; single points
/// travel as `Point`.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(int dim);
  PointCloud(int dim, std::vector<double> coords);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept {
    return dim_ > 0 ? coords_.size() / static_cast<std::size_t>(dim_) : 0;
  }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  std::span<double> operator[](std::size_t i) {
    return {coords_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }

  Point point(std::size_t i) const;
  void push_back(std::span<const double> p);
  void push_back(const Point& p);
  void reserve(std::size_t n) { coords_.reserve(n * static_cast<std::size_t>(dim_)); }
  void clear() noexcept { coords_.clear(); }
  void resize(std::size_t n) { coords_.resize(n * static_cast<std::size_t>(dim_)); }

  const std::vector<double>& data() const noexcept { return coords_; }

  /// First `count` points.
  PointCloud prefix(std::size_t count) const;

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  int dim_ = 0;
  std::vector<double> coords_;
};

inline Eigen::Map<const Vector> as_vector(std::span<const double> p) {
  return {p.data(), static_cast<Eigen::Index>(p.size())};
}

}  // namespace randpoly
