#include "degmap/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "degmap/error.hpp"

namespace degmap {

double eval_side_current(const AnalyticDegradationFn& fn, double i_bat_a, double v_oc) {
  const auto& b = fn.betas;
  const double i = std::abs(i_bat_a);
  return b[0] + b[1] * i + b[2] * v_oc + b[3] * i * i + b[4] * v_oc * v_oc +
         b[5] * i * v_oc + b[6] * v_oc * v_oc * v_oc;
}

OcvCurve::OcvCurve(std::vector<double> soc_points, std::vector<double> voltage_points)
    : soc_(std::move(soc_points)), voltage_(std::move(voltage_points)) {
  require(soc_.size() == voltage_.size() && soc_.size() >= 2,
          ErrorKind::InvalidArgument, "OCV curve needs >= 2 matched points");
  for (size_t i = 0; i < soc_.size(); ++i) {
    require(std::isfinite(soc_[i]) && std::isfinite(voltage_[i]),
            ErrorKind::InvalidArgument, "OCV points must be finite");
    require(soc_[i] >= 0.0 && soc_[i] <= 1.0, ErrorKind::InvalidArgument,
            "OCV SoC points must lie in [0,1]");
  }
  for (size_t i = 1; i < soc_.size(); ++i) {
    require(soc_[i] > soc_[i - 1], ErrorKind::InvalidArgument,
            "OCV SoC points must be strictly ascending");
    require(voltage_[i] >= voltage_[i - 1], ErrorKind::InvalidArgument,
            "OCV must be non-decreasing in SoC");
  }
}

double OcvCurve::voltage_at(double soc) const {
  require(soc >= 0.0 && soc <= 1.0, ErrorKind::InvalidArgument,
          "SoC must lie in [0,1]");
  if (soc <= soc_.front()) return voltage_.front();
  if (soc >= soc_.back()) return voltage_.back();
  auto it = std::upper_bound(soc_.begin(), soc_.end(), soc);
  size_t hi = static_cast<size_t>(it - soc_.begin());
  size_t lo = hi - 1;
  double t = (soc - soc_[lo]) / (soc_[hi] - soc_[lo]);
  return (1.0 - t) * voltage_[lo] + t * voltage_[hi];
}

DiscretizeResult discretize(const AnalyticDegradationFn& fn, const OcvCurve& curve,
                            const SocGrid& soc_grid, const CurrentGrid& current_grid,
                            double cell_capacity_ah) {
  const int n = soc_grid.band_count();
  const int m = current_grid.rate_count();
  linalg::Matrix values(n, m);
  int clamped = 0;
  for (int l = 0; l < n; ++l) {
    const double v_oc = curve.voltage_at(soc_grid.band_centers()[l]);
    for (int j = 0; j < m; ++j) {
      double v = 3600.0 * eval_side_current(fn, current_grid.rates()[j], v_oc);
      if (v < 0.0) {
        v = 0.0;
        ++clamped;
      }
      values(l, j) = v;
    }
  }
  DegradationMap map(soc_grid, current_grid, std::move(values), cell_capacity_ah);
  return DiscretizeResult{std::move(map), clamped};
}

}  // namespace degmap
