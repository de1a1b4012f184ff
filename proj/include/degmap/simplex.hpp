#pragma once

#include <string>
#include <vector>

#include "degmap/linalg.hpp"

namespace degmap::lp {

enum class RowType { LessEqual, Equal };

struct Row {
  std::vector<double> coeffs;
  RowType type = RowType::LessEqual;
  double rhs = 0.0;
};

/// min c'x subject to the rows, x >= 0.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;
};

struct Solution {
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
  double duality_gap = 0.0;  // |primal - dual| / max(1, |primal|)
};

/// Two-phase dense primal simplex. Entering variable by most-negative reduced
/// cost with smallest-index ties; falls back to Bland's rule after a
/// degenerate stall, so it cannot cycle. Deterministic throughout.
/// Throws Infeasible with the violated rows listed in the message, or
/// Unbounded with the ray variable named.
Solution solve(const LinearProgram& lp);

}  // namespace degmap::lp
