#pragma once

#include <array>
#include <vector>

#include "degmap/types.hpp"

namespace degmap {

/// Seven-coefficient polynomial side-current model in |I_bat| and V_oc.
/// Output is in Ah/sec.
struct AnalyticDegradationFn {
  std::array<double, 7> betas{};
};

/// beta1 + beta2|I| + beta3 V + beta4|I|^2 + beta5 V^2 + beta6|I|V + beta7 V^3.
double eval_side_current(const AnalyticDegradationFn& fn, double i_bat_a, double v_oc);

/// Monotone piecewise-linear open-circuit-voltage curve over SoC in [0,1].
class OcvCurve {
 public:
  OcvCurve(std::vector<double> soc_points, std::vector<double> voltage_points);

  /// Interpolated voltage, clamped at the endpoints. SoC must be in [0,1].
  double voltage_at(double soc) const;

  const std::vector<double>& soc_points() const { return soc_; }
  const std::vector<double>& voltage_points() const { return voltage_; }

 private:
  std::vector<double> soc_;
  std::vector<double> voltage_;
};

struct DiscretizeResult {
  DegradationMap map;
  int clamped_count = 0;  // grid nodes where a negative evaluation was clamped to 0
};

/// Samples the analytic model on the (SoC band, current rate) grid after
/// substituting voltage by SoC, converting Ah/sec to Ah/h. Negative
/// evaluations (outside the fit region) clamp to zero and are counted.
DiscretizeResult discretize(const AnalyticDegradationFn& fn, const OcvCurve& curve,
                            const SocGrid& soc_grid, const CurrentGrid& current_grid,
                            double cell_capacity_ah);

}  // namespace degmap
