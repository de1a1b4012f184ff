#pragma once

#include <vector>

#include "degmap/linalg.hpp"
#include "degmap/pattern.hpp"
#include "degmap/types.hpp"

namespace degmap {

/// Solution of min ||M x - q||_2 subject to x >= 0.
struct NnlsSolution {
  std::vector<double> x;        // side currents, A
  double residual_norm = 0.0;   // ||M x - q||_2, Ah
  std::vector<int> active_set;  // indices clamped at zero
  int iterations = 0;
};

/// Active-set (Lawson-Hanson) nonnegative least squares. Columns are scaled
/// to unit norm internally; the tolerance applies to the scaled gradient,
/// relative to max(1, ||q||). Iteration cap is 10x the column count.
NnlsSolution solve_nnls(const linalg::Matrix& m, const std::vector<double>& q,
                        double tol = 1e-10);

NnlsSolution solve_nnls(const PatternSystem& system, double tol = 1e-10);

/// Side currents for one current rate on that rate's own SoC axis.
struct MapSlice {
  double current_rate_a = 0.0;
  std::vector<double> soc_centers;
  std::vector<double> side_current;  // A, aligned with soc_centers
};

/// Identified degradation map: per-rate slices on their native SoC axes plus
/// a common-grid view resampled onto the union of all axes by linear
/// interpolation (clamped at the ends).
struct IdentifiedMap {
  DegradationMap map;
  std::vector<MapSlice> slices;
  NnlsSolution solution;
};

IdentifiedMap solve_map(const PatternSystem& system, double tol = 1e-10);

}  // namespace degmap
