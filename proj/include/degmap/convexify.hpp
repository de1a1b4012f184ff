#pragma once

#include "degmap/types.hpp"

namespace degmap {

/// Convex under-approximation of a normalized map: the lower facets of the
/// 3-D convex hull of (power, soe, value) nodes, as a max-of-planes map.
/// Facets whose unit outward normal has z-component > -1e-12 (upper or
/// near-vertical) are discarded; duplicate planes are merged; planes are
/// ordered lexicographically. If all nodes are coplanar the single common
/// plane is returned.
PwaMap lower_convex_hull_pwa(const NormalizedMap& nmap);

struct PwaValue {
  double value = 0.0;
  int plane = 0;  // index of a maximizing plane (first on ties)
};

/// Total capacity fade per time, kWh/h: max over planes of
/// a1 * P_bat + a2 * E + a3 * C_E.
PwaValue eval_pwa(const PwaMap& pwa, double p_bat_kw, double e_kwh, double c_e_kwh);

struct PwaFitError {
  double rmse_per_h = 0.0;
  double nrmse = 0.0;          // rmse / (max - min) of the map values
  bool nrmse_defined = true;   // false when the map has zero value range
};

/// Fit quality of the PWA surface against the map it approximates, evaluated
/// at every grid node with C_E = 1.
PwaFitError pwa_fit_error(const NormalizedMap& nmap, const PwaMap& pwa);

}  // namespace degmap
