#include "degmap/hull3d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace degmap::hull3d {

namespace {

struct Vec3 {
  double x, y, z;
};

Vec3 sub(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

double length(const Vec3& a) { return std::sqrt(dot(a, a)); }

struct Face {
  int a, b, c;
  Vec3 n;         // outward normal, not normalized
  double offset;  // n . vertex
  bool alive = true;
};

double signed_dist(const Face& f, const Point3& p) {
  return f.n.x * p.x + f.n.y * p.y + f.n.z * p.z - f.offset;
}

bool lex_less(const Point3& a, const Point3& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

bool same_point(const Point3& a, const Point3& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}

}  // namespace

HullResult convex_hull(const std::vector<Point3>& input) {
  // Deterministic preprocessing: lexicographic order, exact duplicates merged
  // (keeping the smallest original index for each distinct point).
  std::vector<int> order(input.size());
  for (size_t i = 0; i < input.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (!same_point(input[a], input[b])) return lex_less(input[a], input[b]);
    return a < b;
  });

  std::vector<Point3> pts;
  std::vector<int> original;  // pts index -> input index
  for (int idx : order) {
    if (!pts.empty() && same_point(pts.back(), input[idx])) continue;
    pts.push_back(input[idx]);
    original.push_back(idx);
  }

  HullResult result;
  const int n = static_cast<int>(pts.size());
  if (n < 3) {
    result.status = HullStatus::Collinear;
    return result;
  }

  double scale = 0.0;
  for (const Point3& p : pts)
    scale = std::max({scale, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
  scale = std::max(scale, 1e-30);
  const double area_eps = 1e-12 * scale * scale;
  const double vol_eps = 1e-12 * scale * scale * scale;

  // Initial simplex from axis-extreme points: farthest pair among the six
  // extremes, then the max-area and max-volume completions over all points.
  int ext[6] = {0, 0, 0, 0, 0, 0};
  for (int i = 0; i < n; ++i) {
    if (pts[i].x < pts[ext[0]].x) ext[0] = i;
    if (pts[i].x > pts[ext[1]].x) ext[1] = i;
    if (pts[i].y < pts[ext[2]].y) ext[2] = i;
    if (pts[i].y > pts[ext[3]].y) ext[3] = i;
    if (pts[i].z < pts[ext[4]].z) ext[4] = i;
    if (pts[i].z > pts[ext[5]].z) ext[5] = i;
  }
  int i0 = ext[0], i1 = ext[1];
  double best_d = -1.0;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) {
      Vec3 d = sub(pts[ext[b]], pts[ext[a]]);
      double dd = dot(d, d);
      if (dd > best_d) {
        best_d = dd;
        i0 = ext[a];
        i1 = ext[b];
      }
    }
  if (i0 == i1 || best_d <= 0.0) {
    result.status = HullStatus::Collinear;
    return result;
  }

  int i2 = -1;
  double best_area = area_eps;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1) continue;
    double area = length(cross(sub(pts[i1], pts[i0]), sub(pts[i], pts[i0])));
    if (area > best_area) {
      best_area = area;
      i2 = i;
    }
  }
  if (i2 < 0) {
    result.status = HullStatus::Collinear;
    return result;
  }

  Vec3 base_n = cross(sub(pts[i1], pts[i0]), sub(pts[i2], pts[i0]));
  int i3 = -1;
  double best_vol = vol_eps;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2) continue;
    double vol = std::abs(dot(base_n, sub(pts[i], pts[i0])));
    if (vol > best_vol) {
      best_vol = vol;
      i3 = i;
    }
  }
  if (i3 < 0) {
    result.status = HullStatus::Coplanar;
    return result;
  }

  const Point3 interior{(pts[i0].x + pts[i1].x + pts[i2].x + pts[i3].x) / 4.0,
                        (pts[i0].y + pts[i1].y + pts[i2].y + pts[i3].y) / 4.0,
                        (pts[i0].z + pts[i1].z + pts[i2].z + pts[i3].z) / 4.0};

  auto oriented_face = [&](int a, int b, int c) {
    Face f{a, b, c, {}, 0.0, true};
    f.n = cross(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
    f.offset = f.n.x * pts[a].x + f.n.y * pts[a].y + f.n.z * pts[a].z;
    if (signed_dist(f, interior) > 0.0) {
      std::swap(f.b, f.c);
      f.n = cross(sub(pts[f.b], pts[f.a]), sub(pts[f.c], pts[f.a]));
      f.offset = f.n.x * pts[f.a].x + f.n.y * pts[f.a].y + f.n.z * pts[f.a].z;
    }
    return f;
  };

  std::vector<Face> faces;
  faces.push_back(oriented_face(i0, i1, i2));
  faces.push_back(oriented_face(i0, i1, i3));
  faces.push_back(oriented_face(i0, i2, i3));
  faces.push_back(oriented_face(i1, i2, i3));

  const double vis_eps = 1e-12 * scale * scale * scale;

  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;

    std::vector<int> visible;
    for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi)
      if (faces[fi].alive && signed_dist(faces[fi], pts[p]) > vis_eps)
        visible.push_back(fi);
    if (visible.empty()) continue;  // inside or on the hull

    // Horizon = directed edges of visible faces whose reverse edge does not
    // belong to a visible face. Keeping the edge direction keeps the new
    // faces wound outward.
    std::map<std::pair<int, int>, int> edges;
    for (int fi : visible) {
      const Face& f = faces[fi];
      edges[{f.a, f.b}] = fi;
      edges[{f.b, f.c}] = fi;
      edges[{f.c, f.a}] = fi;
    }
    std::vector<std::pair<int, int>> horizon;
    for (const auto& [edge, fi] : edges)
      if (!edges.count({edge.second, edge.first})) horizon.push_back(edge);

    for (int fi : visible) faces[fi].alive = false;
    for (const auto& [u, v] : horizon) faces.push_back(oriented_face(u, v, p));
  }

  for (const Face& f : faces) {
    if (!f.alive) continue;
    double len = length(f.n);
    if (len <= 0.0) continue;
    Facet out;
    out.vertex = {original[f.a], original[f.b], original[f.c]};
    out.nx = f.n.x / len;
    out.ny = f.n.y / len;
    out.nz = f.n.z / len;
    result.facets.push_back(out);
  }
  return result;
}

}  // namespace degmap::hull3d
