#include "randpoly/types.hpp"

#include <string>

#include "randpoly/error.hpp"

namespace randpoly {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kDegenerateBody: return "degenerate body";
    case ErrorCode::kDegenerateHull: return "degenerate hull";
    case ErrorCode::kUnbounded: return "unbounded";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kSampleNotInBody: return "sample not in body";
    case ErrorCode::kEnvelopeTooLoose: return "envelope too loose";
    case ErrorCode::kNonConvergence: return "non-convergence";
    case ErrorCode::kNonConvex: return "non-convex input";
    case ErrorCode::kParse: return "parse error";
  }
  return "unknown";
}

PointCloud::PointCloud(int dim) : dim_(dim) {
  if (dim < 1) fail(ErrorCode::kInvalidArgument, "point dimension must be positive");
}

PointCloud::PointCloud(int dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim < 1) fail(ErrorCode::kInvalidArgument, "point dimension must be positive");
  if (coords_.size() % static_cast<std::size_t>(dim) != 0) {
    fail(ErrorCode::kInvalidArgument,
         "coordinate count " + std::to_string(coords_.size()) +
             " is not a multiple of dimension " + std::to_string(dim));
  }
}

Point PointCloud::point(std::size_t i) const { return as_vector((*this)[i]); }

void PointCloud::push_back(std::span<const double> p) {
  if (static_cast<int>(p.size()) != dim_) {
    fail(ErrorCode::kDimensionMismatch, "point has dimension " + std::to_string(p.size()) +
                                            ", expected " + std::to_string(dim_));
  }
  coords_.insert(coords_.end(), p.begin(), p.end());
}

void PointCloud::push_back(const Point& p) {
  push_back(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

PointCloud PointCloud::prefix(std::size_t count) const {
  if (count > size()) count = size();
  return PointCloud(dim_, std::vector<double>(coords_.begin(),
                                              coords_.begin() + static_cast<std::ptrdiff_t>(
                                                                    count * static_cast<std::size_t>(dim_))));
}

}  // namespace randpoly
