#include "degmap/dispatch.hpp"

#include <algorithm>
#include <cmath>

#include "degmap/convexify.hpp"
#include "degmap/error.hpp"

namespace degmap {

namespace {

constexpr int kMaxHorizon = 8760;
constexpr int kMaxPlanes = 64;

}  // namespace

void DispatchProblem::validate() const {
  require(horizon >= 1, ErrorKind::InvalidArgument, "horizon must be >= 1");
  require(horizon <= kMaxHorizon, ErrorKind::InvalidArgument,
          "horizon capped at 8760 steps");
  require(dt_h > 0.0, ErrorKind::InvalidArgument, "dt must be > 0");
  require(static_cast<int>(prices.size()) == horizon, ErrorKind::InvalidArgument,
          "need one price per step");
  require(p_min_kw <= 0.0 && p_max_kw >= 0.0, ErrorKind::InvalidArgument,
          "power bounds must satisfy p_min <= 0 <= p_max");
  require(c_e_kwh > 0.0, ErrorKind::InvalidArgument, "energy capacity must be > 0");
  require(e0_kwh >= 0.0 && e0_kwh <= c_e_kwh, ErrorKind::InvalidArgument,
          "initial SoE must lie in [0, C_E]");
  require(eta_charge > 0.0 && eta_charge <= 1.0 && eta_discharge > 0.0 &&
              eta_discharge <= 1.0,
          ErrorKind::InvalidArgument, "efficiencies must lie in (0,1]");
  require(pwa.plane_count() <= kMaxPlanes, ErrorKind::InvalidArgument,
          "plane count capped at 64");
  require(degradation_price >= 0.0, ErrorKind::InvalidArgument,
          "degradation price must be >= 0");
}

int DispatchLp::epigraph_row_count() const {
  int count = 0;
  for (const lp::Row& row : lp.rows)
    if (row.type == lp::RowType::LessEqual && !row.coeffs.empty()) {
      for (int t = 0; t < horizon; ++t)
        if (row.coeffs[var_j(t)] == -1.0) {
          ++count;
          break;
        }
    }
  return count;
}

DispatchLp build_lp(const DispatchProblem& problem) {
  problem.validate();
  const int n_steps = problem.horizon;
  const auto& planes = problem.pwa.planes();

  DispatchLp built;
  built.horizon = n_steps;

  // Shift the epigraph variable so it stays nonnegative: the surface's
  // minimum over the operating box bounds it from below.
  double min_plane = 0.0;
  for (const Plane& pl : planes) {
    double v = pl.a1 * (pl.a1 >= 0.0 ? problem.p_min_kw : problem.p_max_kw) +
               pl.a2 * (pl.a2 >= 0.0 ? 0.0 : problem.c_e_kwh) +
               pl.a3 * problem.c_e_kwh;
    min_plane = std::min(min_plane, v);
  }
  built.j_shift = -min_plane;  // >= 0

  lp::LinearProgram& lp = built.lp;
  lp.num_vars = 4 * n_steps;
  lp.objective.assign(lp.num_vars, 0.0);
  for (int t = 0; t < n_steps; ++t) {
    lp.objective[built.var_charge(t)] = problem.dt_h * problem.prices[t];
    lp.objective[built.var_discharge(t)] = -problem.dt_h * problem.prices[t];
    lp.objective[built.var_j(t)] = problem.dt_h * problem.degradation_price;
  }
  built.objective_offset = 0.0;
  for (int t = 0; t < n_steps; ++t)
    built.objective_offset += problem.dt_h * problem.degradation_price * built.j_shift;

  auto blank_row = [&](lp::RowType type, double rhs) {
    lp::Row row;
    row.coeffs.assign(lp.num_vars, 0.0);
    row.type = type;
    row.rhs = rhs;
    return row;
  };

  for (int t = 0; t < n_steps; ++t) {
    // SoE recursion: e_t - e_{t-1} - dt*eta_c*pc_t + dt*pd_t/eta_d = [e0].
    lp::Row dyn = blank_row(lp::RowType::Equal, t == 0 ? problem.e0_kwh : 0.0);
    dyn.coeffs[built.var_soe(t)] = 1.0;
    if (t > 0) dyn.coeffs[built.var_soe(t - 1)] = -1.0;
    dyn.coeffs[built.var_charge(t)] = -problem.dt_h * problem.eta_charge;
    dyn.coeffs[built.var_discharge(t)] = problem.dt_h / problem.eta_discharge;
    lp.rows.push_back(std::move(dyn));

    // Epigraph rows: j' - shift >= a1*(pc - pd) + a2*e + a3*C_E rearranged to
    // a1*pc - a1*pd + a2*e - j' <= -a3*C_E - shift.
    for (const Plane& pl : planes) {
      lp::Row epi = blank_row(lp::RowType::LessEqual,
                              -pl.a3 * problem.c_e_kwh - built.j_shift);
      epi.coeffs[built.var_charge(t)] = pl.a1;
      epi.coeffs[built.var_discharge(t)] = -pl.a1;
      epi.coeffs[built.var_soe(t)] = pl.a2;
      epi.coeffs[built.var_j(t)] = -1.0;
      lp.rows.push_back(std::move(epi));
    }

    lp::Row cap = blank_row(lp::RowType::LessEqual, problem.c_e_kwh);
    cap.coeffs[built.var_soe(t)] = 1.0;
    lp.rows.push_back(std::move(cap));

    lp::Row charge_cap = blank_row(lp::RowType::LessEqual, problem.p_max_kw);
    charge_cap.coeffs[built.var_charge(t)] = 1.0;
    lp.rows.push_back(std::move(charge_cap));

    lp::Row discharge_cap = blank_row(lp::RowType::LessEqual, -problem.p_min_kw);
    discharge_cap.coeffs[built.var_discharge(t)] = 1.0;
    lp.rows.push_back(std::move(discharge_cap));
  }
  return built;
}

DispatchSolution solve_lp(const DispatchLp& built) {
  lp::Solution raw = lp::solve(built.lp);

  DispatchSolution sol;
  sol.objective = raw.objective - built.objective_offset;
  sol.duality_gap = raw.duality_gap;
  sol.iterations = raw.iterations;
  for (int t = 0; t < built.horizon; ++t) {
    double pc = raw.x[built.var_charge(t)];
    double pd = raw.x[built.var_discharge(t)];
    sol.power_kw.push_back(pc - pd);
    sol.soe_kwh.push_back(raw.x[built.var_soe(t)]);
    sol.deg_cost_rate.push_back(raw.x[built.var_j(t)] - built.j_shift);
    if (pc > 1e-7 && pd > 1e-7) sol.simultaneous_steps.push_back(t);
  }
  return sol;
}

DispatchSolution solve_dispatch(const DispatchProblem& problem) {
  DispatchLp built = build_lp(problem);
  DispatchSolution sol = solve_lp(built);

  // Validate the SoE recursion against the returned powers.
  double e_prev = problem.e0_kwh;
  for (int t = 0; t < problem.horizon; ++t) {
    double pc = std::max(sol.power_kw[t], 0.0);
    double pd = std::max(-sol.power_kw[t], 0.0);
    // The LP may split power into simultaneous parts; recompute from the
    // stored net power only when the step is clean.
    double expected = e_prev + problem.dt_h * (problem.eta_charge * pc -
                                               pd / problem.eta_discharge);
    bool simultaneous = std::find(sol.simultaneous_steps.begin(),
                                  sol.simultaneous_steps.end(),
                                  t) != sol.simultaneous_steps.end();
    if (!simultaneous)
      sol.max_recursion_residual = std::max(sol.max_recursion_residual,
                                            std::abs(expected - sol.soe_kwh[t]));
    e_prev = sol.soe_kwh[t];
  }
  return sol;
}

}  // namespace degmap
