#include "degmap/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "degmap/error.hpp"

namespace degmap {

namespace {

// Index and weight of the segment containing x; clamps outside [front, back].
struct AxisPos {
  int lo = 0;
  double t = 0.0;
  bool clamped = false;
};

AxisPos locate(const std::vector<double>& axis, double x) {
  AxisPos pos;
  if (axis.size() == 1) {
    pos.clamped = x != axis.front();
    return pos;
  }
  if (x <= axis.front()) {
    pos.clamped = x < axis.front();
    return pos;
  }
  if (x >= axis.back()) {
    pos.lo = static_cast<int>(axis.size()) - 2;
    pos.t = 1.0;
    pos.clamped = x > axis.back();
    return pos;
  }
  auto it = std::upper_bound(axis.begin(), axis.end(), x);
  pos.lo = static_cast<int>(it - axis.begin()) - 1;
  pos.t = (x - axis[pos.lo]) / (axis[pos.lo + 1] - axis[pos.lo]);
  return pos;
}

}  // namespace

MapSample sample_side_current(const DegradationMap& map, double q_ah, double i_a) {
  require(std::isfinite(q_ah) && std::isfinite(i_a), ErrorKind::InvalidArgument,
          "map query must be finite");
  require(q_ah >= 0.0 && q_ah <= map.cell_capacity_ah(), ErrorKind::InvalidArgument,
          "charge query must lie in [0, C_Q]");

  const double soc = q_ah / map.cell_capacity_ah();
  const AxisPos sp = locate(map.soc_grid().band_centers(), soc);
  const AxisPos rp = locate(map.current_grid().rates(), std::abs(i_a));

  const int s1 = sp.lo;
  const int s2 = std::min(sp.lo + 1, map.soc_grid().band_count() - 1);
  const int r1 = rp.lo;
  const int r2 = std::min(rp.lo + 1, map.current_grid().rate_count() - 1);

  const double v =
      (1.0 - sp.t) * ((1.0 - rp.t) * map.at(s1, r1) + rp.t * map.at(s1, r2)) +
      sp.t * ((1.0 - rp.t) * map.at(s2, r1) + rp.t * map.at(s2, r2));
  return MapSample{v, sp.clamped || rp.clamped};
}

EnergyRate cell_degradation_energy(const DegradationMap& map, double q_c_ah,
                                   double i_c_a, double v_oc_mean) {
  require(v_oc_mean > 0.0, ErrorKind::InvalidArgument, "mean OCV must be > 0");
  MapSample s = sample_side_current(map, q_c_ah, i_c_a);
  return EnergyRate{s.value * v_oc_mean * 1e-3, s.clamped};
}

EnergyRate system_degradation(const DegradationMap& map, const BatteryConfig& config,
                              double q_abs_ah, double i_bat_a) {
  config.validate();
  require(q_abs_ah >= 0.0 &&
              q_abs_ah <= config.n_parallel * map.cell_capacity_ah(),
          ErrorKind::InvalidArgument,
          "system charge must lie in [0, N_par * C_Q]");
  // The division may land one ulp past C_Q when q_abs sits on the bound.
  double q_cell = std::min(q_abs_ah / config.n_parallel, map.cell_capacity_ah());
  MapSample s = sample_side_current(map, q_cell, i_bat_a / config.n_parallel);
  return EnergyRate{config.n_parallel * s.value * config.n_series *
                        config.mean_ocv_v * 1e-3,
                    s.clamped};
}

NormalizedMap normalize_map(const DegradationMap& map, double v_oc_mean,
                            int soe_samples, int power_samples) {
  require(v_oc_mean > 0.0, ErrorKind::InvalidArgument, "mean OCV must be > 0");
  require(soe_samples >= 2 && power_samples >= 2, ErrorKind::InvalidArgument,
          "need at least 2 samples per axis");

  const double c_q = map.cell_capacity_ah();
  const double p_max = map.current_grid().rates().back() / c_q;  // 1/h

  std::vector<double> soe(soe_samples);
  for (int i = 0; i < soe_samples; ++i)
    soe[i] = static_cast<double>(i) / (soe_samples - 1);

  // Built as an exact mirror so the even symmetry in power survives floating
  // point and carries through to sign-paired hull planes.
  std::vector<double> power(power_samples);
  for (int j = power_samples - 1; 2 * j >= power_samples - 1; --j) {
    double v = p_max * (2.0 * j - (power_samples - 1)) / (power_samples - 1);
    power[j] = v;
    power[power_samples - 1 - j] = -v;
  }
  if (power_samples % 2 == 1) power[(power_samples - 1) / 2] = 0.0;

  linalg::Matrix values(soe_samples, power_samples);
  for (int i = 0; i < soe_samples; ++i)
    for (int j = 0; j < power_samples; ++j) {
      double q = std::min(soe[i] * c_q, c_q);
      double cur = std::abs(power[j]) * c_q;
      values(i, j) = sample_side_current(map, q, cur).value / c_q;
    }
  return NormalizedMap(std::move(soe), std::move(power), std::move(values));
}

DegradationMap replicate_parallel(const DegradationMap& map, int n) {
  require(n >= 1, ErrorKind::InvalidArgument, "replication factor must be >= 1");
  std::vector<double> rates = map.current_grid().rates();
  for (double& r : rates) r *= n;
  linalg::Matrix values = map.side_current();
  for (double& v : values.data()) v *= n;
  return DegradationMap(map.soc_grid(), CurrentGrid(std::move(rates)),
                        std::move(values), map.cell_capacity_ah() * n);
}

}  // namespace degmap
