#pragma once

#include "degmap/types.hpp"

namespace degmap {

/// Bilinear sample of a degradation map with edge clamping.
struct MapSample {
  double value = 0.0;   // Ah/h
  bool clamped = false; // query fell outside the grid hull
};

/// Side current at absolute cell charge q (Ah) and cell current magnitude
/// i (A), bilinearly interpolated over (SoC band centers) x (rates).
MapSample sample_side_current(const DegradationMap& map, double q_ah, double i_a);

struct EnergyRate {
  double kwh_per_h = 0.0;
  bool clamped = false;
};

/// Cell degradation in energy per time: h(Q^c, I^c) * V_oc_mean.
EnergyRate cell_degradation_energy(const DegradationMap& map, double q_c_ah,
                                   double i_c_a, double v_oc_mean);

/// Degradation of a sized system: N_par * h(Q/N_par, I/N_par) * N_ser * V_oc.
EnergyRate system_degradation(const DegradationMap& map, const BatteryConfig& config,
                              double q_abs_ah, double i_bat_a);

/// Size-independent map over (normalized SoE, P_bat/C_E), values in 1/h:
/// value(e, p) = h(e * C_Q, |p| * C_Q) / C_Q. The power axis spans
/// [-p_max, p_max] with p_max = max rate / C_Q, mirrored symmetrically
/// because cell maps are identified from current magnitude only.
NormalizedMap normalize_map(const DegradationMap& map, double v_oc_mean,
                            int soe_samples, int power_samples);

/// Map of n identical cells in parallel treated as one super-cell: capacity,
/// rates and side currents all scale by n; the SoC axis is unchanged.
DegradationMap replicate_parallel(const DegradationMap& map, int n);

}  // namespace degmap
