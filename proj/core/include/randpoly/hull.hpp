#pragma once

#include <cstddef>
#include <vector>

#include "randpoly/bodies.hpp"
#include "randpoly/predicates.hpp"
#include "randpoly/types.hpp"

namespace randpoly {

struct HullFacet {
  std::vector<int> vertices;   // indices into HullResult::points
  std::vector<int> neighbors;  // neighbors[k] shares the ridge opposite vertices[k]
  Vector normal;               // outward unit normal
  double offset = 0.0;         // normal . x <= offset for every input point
};

/// Simplicial boundary of conv(points).
///
/// `points` holds every input point referenced by a facet; `vertex_ids`
/// selects the extreme ones. The two differ only for degenerate input where
/// a triangulated facet keeps a point lying inside a flat face.
struct HullResult {
  int dim = 0;
  PointCloud points;
  std::vector<std::size_t> source_index;
  std::vector<int> vertex_ids;
  std::vector<HullFacet> facets;
  std::vector<predicates::Hyperplane> planes;  // exact; interior on the negative side
  Point interior_point;

  PointCloud vertices() const;
  /// Input indices of the extreme points, ascending.
  std::vector<std::size_t> vertex_source_indices() const;
};

/// Exact convex hull for 2 <= d <= 6. Throws kDegenerateHull when the
/// points do not span R^d.
HullResult convex_hull(const PointCloud& points);

/// Volume by fanning simplices from the interior point.
double polytope_volume(const HullResult& hull);

/// |K \ conv(points)|. Every point must lie in K (kSampleNotInBody otherwise);
/// a hull without interior leaves the whole body missing.
double missing_volume(const ConvexBody& body, const PointCloud& points);

}  // namespace randpoly
