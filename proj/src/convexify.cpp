#include "degmap/convexify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "degmap/error.hpp"
#include "degmap/hull3d.hpp"
#include "degmap/linalg.hpp"

namespace degmap {

namespace {

std::vector<hull3d::Point3> map_nodes(const NormalizedMap& nmap) {
  std::vector<hull3d::Point3> pts;
  pts.reserve(nmap.soe_axis().size() * nmap.power_axis().size());
  for (size_t i = 0; i < nmap.soe_axis().size(); ++i)
    for (size_t j = 0; j < nmap.power_axis().size(); ++j)
      pts.push_back({nmap.power_axis()[j], nmap.soe_axis()[i],
                     nmap.at(static_cast<int>(i), static_cast<int>(j))});
  return pts;
}

// Least-squares plane z = a1 x + a2 y + a3 through all nodes; exact when the
// nodes are coplanar.
Plane fit_plane(const std::vector<hull3d::Point3>& pts) {
  linalg::Matrix a(static_cast<int>(pts.size()), 3);
  linalg::Vector b(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    a(static_cast<int>(i), 0) = pts[i].x;
    a(static_cast<int>(i), 1) = pts[i].y;
    a(static_cast<int>(i), 2) = 1.0;
    b[i] = pts[i].z;
  }
  linalg::Vector c = linalg::solve_least_squares(a, b);
  return Plane{c[0], c[1], c[2]};
}

}  // namespace

PwaMap lower_convex_hull_pwa(const NormalizedMap& nmap) {
  require(nmap.soe_axis().size() >= 2 && nmap.power_axis().size() >= 2,
          ErrorKind::InvalidArgument,
          "need at least 3 non-collinear nodes to build a PWA surface");
  std::vector<hull3d::Point3> pts = map_nodes(nmap);

  // The hull works on axis ranges of roughly unit size while map values can
  // sit at 1e-7..1e-3; rescaling z balances the orientation predicates.
  double z_min = pts.front().z, z_max = pts.front().z;
  for (const auto& p : pts) {
    z_min = std::min(z_min, p.z);
    z_max = std::max(z_max, p.z);
  }
  const double z_span = z_max - z_min;
  const double z_scale = z_span > 0.0 ? z_span : 1.0;

  std::vector<hull3d::Point3> scaled = pts;
  for (auto& p : scaled) p.z = (p.z - z_min) / z_scale;

  hull3d::HullResult hull = hull3d::convex_hull(scaled);
  if (hull.status == hull3d::HullStatus::Collinear)
    fail(ErrorKind::InvalidArgument,
         "map nodes are collinear; no PWA surface exists");

  std::vector<Plane> planes;
  if (hull.status == hull3d::HullStatus::Coplanar) {
    planes.push_back(fit_plane(pts));
  } else {
    for (const hull3d::Facet& f : hull.facets) {
      if (f.nz >= -1e-12) continue;  // keep lower facets only
      // Plane through the facet in scaled space, then undo the z scaling.
      double a1 = -f.nx / f.nz;
      double a2 = -f.ny / f.nz;
      const auto& v0 = scaled[f.vertex[0]];
      double a3 = v0.z - a1 * v0.x - a2 * v0.y;
      planes.push_back(Plane{a1 * z_scale, a2 * z_scale,
                             a3 * z_scale + z_min});
    }
    require(!planes.empty(), ErrorKind::InvalidArgument,
            "hull produced no lower facets");
  }

  // Any rounding that lifts a plane above a node gets pushed back down, so
  // the max-of-planes surface never exceeds the data it approximates.
  for (Plane& pl : planes) {
    double excess = 0.0;
    for (const auto& p : pts)
      excess = std::max(excess, pl.a1 * p.x + pl.a2 * p.y + pl.a3 - p.z);
    if (excess > 0.0) pl.a3 -= excess;
  }

  std::sort(planes.begin(), planes.end(), [](const Plane& a, const Plane& b) {
    if (a.a1 != b.a1) return a.a1 < b.a1;
    if (a.a2 != b.a2) return a.a2 < b.a2;
    return a.a3 < b.a3;
  });
  return PwaMap(std::move(planes)).deduplicated();
}

PwaValue eval_pwa(const PwaMap& pwa, double p_bat_kw, double e_kwh, double c_e_kwh) {
  require(c_e_kwh > 0.0, ErrorKind::InvalidArgument, "energy capacity must be > 0");
  const auto& planes = pwa.planes();
  PwaValue best{planes[0].a1 * p_bat_kw + planes[0].a2 * e_kwh + planes[0].a3 * c_e_kwh,
                0};
  for (int k = 1; k < static_cast<int>(planes.size()); ++k) {
    double v = planes[k].a1 * p_bat_kw + planes[k].a2 * e_kwh + planes[k].a3 * c_e_kwh;
    if (v > best.value) {
      best.value = v;
      best.plane = k;
    }
  }
  return best;
}

PwaFitError pwa_fit_error(const NormalizedMap& nmap, const PwaMap& pwa) {
  double sq_sum = 0.0;
  double v_min = nmap.at(0, 0), v_max = nmap.at(0, 0);
  int count = 0;
  for (size_t i = 0; i < nmap.soe_axis().size(); ++i)
    for (size_t j = 0; j < nmap.power_axis().size(); ++j) {
      double v = nmap.at(static_cast<int>(i), static_cast<int>(j));
      double approx = eval_pwa(pwa, nmap.power_axis()[j], nmap.soe_axis()[i], 1.0).value;
      sq_sum += (v - approx) * (v - approx);
      v_min = std::min(v_min, v);
      v_max = std::max(v_max, v);
      ++count;
    }
  PwaFitError err;
  err.rmse_per_h = std::sqrt(sq_sum / count);
  if (v_max > v_min) {
    err.nrmse = err.rmse_per_h / (v_max - v_min);
  } else {
    err.nrmse = std::numeric_limits<double>::quiet_NaN();
    err.nrmse_defined = false;
  }
  return err;
}

}  // namespace degmap
