#pragma once

#include <string>
#include <vector>

#include "degmap/linalg.hpp"

namespace degmap {

// Unit conventions used throughout: currents in A, charge in Ah, time in h,
// energy in kWh. SoC and DoD are fractions in (0,1]; normalized map values
// are in 1/h. All types below are immutable after construction.

/// Discretization of the SoC axis into bands, identified by their centers.
class SocGrid {
 public:
  explicit SocGrid(std::vector<double> band_centers);

  /// Uniform n-band grid with centers (2l-1)/(2n), l = 1..n.
  static SocGrid uniform(int band_count);

  const std::vector<double>& band_centers() const { return centers_; }
  int band_count() const { return static_cast<int>(centers_.size()); }

 private:
  std::vector<double> centers_;
};

SocGrid uniform_soc_grid(int band_count);

/// Discretization of the battery-current axis (magnitudes, A).
class CurrentGrid {
 public:
  explicit CurrentGrid(std::vector<double> rates_a);

  const std::vector<double>& rates() const { return rates_; }
  int rate_count() const { return static_cast<int>(rates_.size()); }

 private:
  std::vector<double> rates_;
};

/// Cell-level side-current surface over (SoC band, current rate).
/// Entries are in A (equivalently Ah lost per hour); all nonnegative.
class DegradationMap {
 public:
  DegradationMap(SocGrid soc_grid, CurrentGrid current_grid,
                 linalg::Matrix side_current_ah_per_h, double cell_capacity_ah);

  const SocGrid& soc_grid() const { return soc_; }
  const CurrentGrid& current_grid() const { return rates_; }
  const linalg::Matrix& side_current() const { return values_; }
  double cell_capacity_ah() const { return cell_capacity_ah_; }

  /// Side current at (band index, rate index).
  double at(int band, int rate) const { return values_(band, rate); }

 private:
  SocGrid soc_;
  CurrentGrid rates_;
  linalg::Matrix values_;  // rows = bands, cols = rates
  double cell_capacity_ah_;
};

/// Size-independent degradation surface over (normalized SoE, P/C_E).
/// Values are capacity fade per time divided by energy capacity, in 1/h.
class NormalizedMap {
 public:
  NormalizedMap(std::vector<double> soe_axis, std::vector<double> power_axis_per_h,
                linalg::Matrix values_per_h);

  const std::vector<double>& soe_axis() const { return soe_; }
  const std::vector<double>& power_axis() const { return power_; }
  const linalg::Matrix& values() const { return values_; }

  /// Value at (soe index, power index).
  double at(int soe, int power) const { return values_(soe, power); }

 private:
  std::vector<double> soe_;
  std::vector<double> power_;
  linalg::Matrix values_;  // rows = soe axis, cols = power axis
};

/// One supporting plane z = a1*x + a2*y + a3 of a max-of-planes surface,
/// with x = P/C_E (1/h), y = normalized SoE. a1 dimensionless, a2/a3 in 1/h.
struct Plane {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
};

bool operator==(const Plane& lhs, const Plane& rhs);

/// Convex piecewise-affine degradation surface: max over planes.
class PwaMap {
 public:
  explicit PwaMap(std::vector<Plane> planes);

  const std::vector<Plane>& planes() const { return planes_; }
  int plane_count() const { return static_cast<int>(planes_.size()); }

  /// Planes with coefficient-wise duplicates (|diff| <= tol) merged,
  /// keeping first occurrences in order.
  PwaMap deduplicated(double tol = 1e-14) const;

  /// Count of planes removed by deduplicated() at the given tolerance.
  int duplicate_count(double tol = 1e-14) const;

 private:
  std::vector<Plane> planes_;
};

/// Battery system composition: n_parallel strings of n_series cells.
struct BatteryConfig {
  int n_parallel = 1;
  int n_series = 1;
  double mean_ocv_v = 0.0;
  double cell_capacity_ah = 0.0;

  void validate() const;
};

/// System energy capacity N_par * C_Q^c * N_ser * V_oc_mean, in kWh.
double energy_capacity_kwh(const BatteryConfig& config);

}  // namespace degmap
