#include "degmap/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "degmap/error.hpp"

namespace degmap::lp {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr int kStallLimit = 64;  // degenerate iterations before Bland's rule

struct Tableau {
  int m = 0;          // constraint rows
  int n_total = 0;    // structural + slack + artificial columns
  int art_begin = 0;  // first artificial column; that block carries B^-1
  linalg::Matrix a;   // m x n_total, kept as B^-1 * A
  std::vector<double> b;   // current basic values, >= 0
  std::vector<int> basis;  // column basic in each row
};

// One simplex phase. Entering column by most-negative reduced cost with
// smallest-index ties, switching to Bland's rule after a degenerate stall.
int run_phase(Tableau& t, const std::vector<double>& cost, int max_iterations,
              bool phase_one, const std::vector<bool>& allowed) {
  const int m = t.m;
  const int n = t.n_total;
  int iterations = 0;
  int stall = 0;
  bool bland = false;

  std::vector<double> reduced(n);
  auto objective_value = [&]() {
    double v = 0.0;
    for (int i = 0; i < m; ++i) v += cost[t.basis[i]] * t.b[i];
    return v;
  };
  double last_obj = objective_value();

  while (true) {
    if (iterations >= max_iterations)
      fail(ErrorKind::SolverFailure,
           "simplex hit the iteration cap (" + std::to_string(max_iterations) + ")");

    for (int j = 0; j < n; ++j) reduced[j] = cost[j];
    for (int i = 0; i < m; ++i) {
      double cb = cost[t.basis[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < n; ++j) reduced[j] -= cb * t.a(i, j);
    }

    int enter = -1;
    if (!bland) {
      double best = -kReducedCostTol;
      for (int j = 0; j < n; ++j)
        if (allowed[j] && reduced[j] < best) {
          best = reduced[j];
          enter = j;
        }
    } else {
      for (int j = 0; j < n; ++j)
        if (allowed[j] && reduced[j] < -kReducedCostTol) {
          enter = j;
          break;
        }
    }
    if (enter < 0) return iterations;

    // Ratio test; ties broken by smallest basic variable index (Bland-safe).
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      double a = t.a(i, enter);
      if (a > kPivotTol) {
        double ratio = t.b[i] / a;
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 && t.basis[i] < t.basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) {
      if (phase_one)
        fail(ErrorKind::SolverFailure, "phase-1 subproblem unbounded");
      fail(ErrorKind::Unbounded,
           "LP is unbounded along variable x" + std::to_string(enter));
    }

    double piv = t.a(leave, enter);
    for (int j = 0; j < n; ++j) t.a(leave, j) /= piv;
    t.b[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = t.a(i, enter);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) t.a(i, j) -= f * t.a(leave, j);
      t.b[i] -= f * t.b[leave];
      if (t.b[i] < 0.0 && t.b[i] > -1e-12) t.b[i] = 0.0;
    }
    t.basis[leave] = enter;
    ++iterations;

    double obj = objective_value();
    if (obj < last_obj - 1e-12) {
      stall = 0;
      bland = false;
    } else if (++stall >= kStallLimit) {
      bland = true;
    }
    last_obj = obj;
  }
}

}  // namespace

Solution solve(const LinearProgram& lp) {
  require(lp.num_vars > 0, ErrorKind::InvalidArgument, "LP has no variables");
  require(static_cast<int>(lp.objective.size()) == lp.num_vars,
          ErrorKind::InvalidArgument, "objective size mismatch");
  require(!lp.rows.empty(), ErrorKind::InvalidArgument, "LP has no constraints");
  for (const Row& row : lp.rows)
    require(static_cast<int>(row.coeffs.size()) == lp.num_vars,
            ErrorKind::InvalidArgument, "row size mismatch");

  const int m = static_cast<int>(lp.rows.size());
  int slacks = 0;
  for (const Row& row : lp.rows)
    if (row.type == RowType::LessEqual) ++slacks;

  Tableau t;
  t.m = m;
  t.art_begin = lp.num_vars + slacks;
  t.n_total = t.art_begin + m;
  t.a = linalg::Matrix(m, t.n_total);
  t.b.resize(m);
  t.basis.assign(m, -1);

  // Rows are normalized to b >= 0 and equilibrated to max |coeff| = 1.
  std::vector<bool> art_needed(m, false);
  int slack_idx = lp.num_vars;
  for (int i = 0; i < m; ++i) {
    const Row& row = lp.rows[i];
    double sign = row.rhs < 0.0 ? -1.0 : 1.0;
    double max_abs = std::abs(row.rhs);
    for (double c : row.coeffs) max_abs = std::max(max_abs, std::abs(c));
    double scale = (max_abs > 0.0 ? 1.0 / max_abs : 1.0) * sign;
    for (int j = 0; j < lp.num_vars; ++j) t.a(i, j) = row.coeffs[j] * scale;
    t.b[i] = row.rhs * scale;

    if (row.type == RowType::LessEqual) {
      t.a(i, slack_idx) = sign;  // negated rows turn <= into >=
      if (sign > 0.0) t.basis[i] = slack_idx;
      ++slack_idx;
    }
    t.a(i, t.art_begin + i) = 1.0;  // artificial block starts as identity
    if (t.basis[i] < 0) {
      t.basis[i] = t.art_begin + i;
      art_needed[i] = true;
    }
  }
  const std::vector<double> b0 = t.b;  // scaled rhs, for the dual value

  const int max_iterations = 50 * (m + t.n_total);
  int total_iterations = 0;

  bool any_artificial = false;
  for (bool x : art_needed) any_artificial |= x;

  if (any_artificial) {
    std::vector<bool> allowed(t.n_total, false);
    for (int j = 0; j < t.art_begin; ++j) allowed[j] = true;
    for (int i = 0; i < m; ++i)
      if (art_needed[i]) allowed[t.art_begin + i] = true;

    std::vector<double> phase1_cost(t.n_total, 0.0);
    for (int i = 0; i < m; ++i)
      if (art_needed[i]) phase1_cost[t.art_begin + i] = 1.0;

    total_iterations += run_phase(t, phase1_cost, max_iterations, true, allowed);

    std::vector<int> violated;
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= t.art_begin && t.b[i] > 1e-9)
        violated.push_back(t.basis[i] - t.art_begin);
    if (!violated.empty()) {
      std::string rows;
      for (int r : violated) rows += (rows.empty() ? "" : ", ") + std::to_string(r);
      fail(ErrorKind::Infeasible,
           "LP infeasible; unsatisfiable constraint rows: " + rows);
    }

    // Pivot leftover zero-valued artificials out where a real column can
    // replace them; rows with none are redundant and keep the zero.
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] < t.art_begin) continue;
      int enter = -1;
      for (int j = 0; j < t.art_begin; ++j)
        if (std::abs(t.a(i, j)) > kPivotTol) {
          enter = j;
          break;
        }
      if (enter < 0) continue;
      double piv = t.a(i, enter);
      for (int j = 0; j < t.n_total; ++j) t.a(i, j) /= piv;
      t.b[i] /= piv;
      for (int k = 0; k < m; ++k) {
        if (k == i) continue;
        double f = t.a(k, enter);
        if (f == 0.0) continue;
        for (int j = 0; j < t.n_total; ++j) t.a(k, j) -= f * t.a(i, j);
        t.b[k] -= f * t.b[i];
      }
      t.basis[i] = enter;
    }
  }

  std::vector<bool> allowed(t.n_total, false);
  for (int j = 0; j < t.art_begin; ++j) allowed[j] = true;
  std::vector<double> phase2_cost(t.n_total, 0.0);
  for (int j = 0; j < lp.num_vars; ++j) phase2_cost[j] = lp.objective[j];

  total_iterations += run_phase(t, phase2_cost, max_iterations, false, allowed);

  Solution sol;
  sol.x.assign(lp.num_vars, 0.0);
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < lp.num_vars) sol.x[t.basis[i]] = t.b[i];
  sol.objective = 0.0;
  for (int j = 0; j < lp.num_vars; ++j) sol.objective += lp.objective[j] * sol.x[j];
  sol.iterations = total_iterations;

  // The artificial block holds B^-1, so y = c_B B^-1 and the dual value is
  // y . b0; the gap against c . x measures accumulated tableau drift.
  double dual = 0.0;
  for (int i = 0; i < m; ++i) {
    double y_i = 0.0;
    for (int k = 0; k < m; ++k) y_i += phase2_cost[t.basis[k]] * t.a(k, t.art_begin + i);
    dual += y_i * b0[i];
  }
  sol.duality_gap = std::abs(sol.objective - dual) / std::max(1.0, std::abs(sol.objective));
  return sol;
}

}  // namespace degmap::lp
