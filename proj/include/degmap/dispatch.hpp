#pragma once

#include <vector>

#include "degmap/simplex.hpp"
#include "degmap/types.hpp"

namespace degmap {

/// Price-arbitrage dispatch of one battery over a horizon, with the PWA
/// degradation surface priced into the objective through epigraph variables.
struct DispatchProblem {
  int horizon = 0;     // steps
  double dt_h = 1.0;   // step length, hours
  std::vector<double> prices;  // currency/kWh bought, one per step
  double p_min_kw = 0.0;       // most negative grid power (discharge limit)
  double p_max_kw = 0.0;       // charge limit
  double e0_kwh = 0.0;         // initial stored energy
  double c_e_kwh = 0.0;        // energy capacity
  double eta_charge = 1.0;
  double eta_discharge = 1.0;
  PwaMap pwa{std::vector<Plane>{Plane{}}};
  double degradation_price = 0.0;  // currency per kWh of lost capacity

  void validate() const;
};

/// Dispatch LP plus the variable layout needed to read a solution back.
/// Per step t the variables are charge power, discharge power, end-of-step
/// SoE, and a shifted epigraph scalar standing above every plane of Eq-style
/// constraints j >= a1*P + a2*E + a3*C_E.
struct DispatchLp {
  lp::LinearProgram lp;
  int horizon = 0;
  double j_shift = 0.0;        // epigraph variable offset keeping it >= 0
  double objective_offset = 0.0;  // subtract after solving

  int var_charge(int t) const { return 4 * t; }
  int var_discharge(int t) const { return 4 * t + 1; }
  int var_soe(int t) const { return 4 * t + 2; }
  int var_j(int t) const { return 4 * t + 3; }

  int epigraph_row_count() const;
};

DispatchLp build_lp(const DispatchProblem& problem);

struct DispatchSolution {
  std::vector<double> power_kw;        // net grid power per step (charge > 0)
  std::vector<double> soe_kwh;         // end-of-step stored energy
  std::vector<double> deg_cost_rate;   // epigraph values, kWh/h
  double objective = 0.0;              // currency
  double duality_gap = 0.0;
  int iterations = 0;
  double max_recursion_residual = 0.0;
  std::vector<int> simultaneous_steps;  // both charge and discharge > tol
};

DispatchSolution solve_lp(const DispatchLp& built);

/// build_lp + solve_lp + solution validation in one call.
DispatchSolution solve_dispatch(const DispatchProblem& problem);

}  // namespace degmap
