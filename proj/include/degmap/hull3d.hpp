#pragma once

#include <array>
#include <vector>

namespace degmap::hull3d {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Triangular hull facet; vertex indices refer to the input point list and
/// wind counterclockwise seen from outside.
struct Facet {
  std::array<int, 3> vertex{};
  double nx = 0.0, ny = 0.0, nz = 0.0;  // unit outward normal
};

enum class HullStatus {
  Ok,         // full-dimensional hull
  Coplanar,   // all points lie on one plane
  Collinear,  // all points lie on one line (or fewer than 3 distinct points)
};

struct HullResult {
  HullStatus status = HullStatus::Ok;
  std::vector<Facet> facets;  // empty unless status == Ok
};

/// Incremental convex hull with deterministic tie-breaking: exact duplicates
/// are merged and points are inserted in lexicographic (x, y, z) order.
/// Orientation predicates use a relative tolerance on the scale of the data.
HullResult convex_hull(const std::vector<Point3>& points);

}  // namespace degmap::hull3d
