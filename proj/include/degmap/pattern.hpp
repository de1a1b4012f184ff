#pragma once

#include <utility>
#include <vector>

#include "degmap/linalg.hpp"
#include "degmap/types.hpp"

namespace degmap {

/// One manufacturer cycle-test row: a repeated DoD swing at fixed current.
struct CycleTestRecord {
  double dod = 0.0;     // fraction in (0,1]
  double n_cyc = 0.0;   // achieved full cycles (real-valued)
  double q_s_ah = 0.0;  // measured lost charge, Ah
};

/// Cycle tests for one current rate on one cell, sorted by ascending DoD.
class CycleTestSet {
 public:
  CycleTestSet(double i_bat_a, double cell_capacity_ah,
               std::vector<CycleTestRecord> records, SocGrid soc_grid);

  double i_bat_a() const { return i_bat_a_; }
  double cell_capacity_ah() const { return cell_capacity_ah_; }
  const std::vector<CycleTestRecord>& records() const { return records_; }
  const SocGrid& soc_grid() const { return soc_grid_; }

 private:
  double i_bat_a_;
  double cell_capacity_ah_;
  std::vector<CycleTestRecord> records_;
  SocGrid soc_grid_;
};

/// Identifies the unknown behind one pattern-matrix column.
struct ColumnLabel {
  double soc_band_center = 0.0;
  double current_rate_a = 0.0;
};

/// Linear system linking discretized side currents to measured charge loss:
/// matrix entries in hours, rhs in Ah, one column per (band, rate) unknown.
struct PatternSystem {
  linalg::Matrix matrix;
  std::vector<double> rhs_ah;
  std::vector<ColumnLabel> column_labels;
  double cell_capacity_ah = 0.0;
  /// Row indices whose assembled coverage differs from covered_bands()'s
  /// closed-interval rule (see build_pattern_system).
  std::vector<int> coverage_divergences;
};

/// Number of band traversals implied by a cycle-test record: 2 * n_cyc / DoD.
double pattern_count(const CycleTestRecord& record);

/// Time to traverse one SoC band at constant current: C_Q / (I_bat * n_bd), hours.
double band_traverse_time_h(double cell_capacity_ah, double i_bat_a, int band_count);

/// Band indices (0-based) whose centers lie in the closed DoD swing window
/// [0.5 - dod/2, 0.5 + dod/2]. Throws DegenerateCoverage when no center falls
/// inside the window.
std::vector<int> covered_bands(double dod, const SocGrid& soc_grid);

/// Contiguous 0-based index range [first, last] of the floor(dod*n)+1 bands
/// centered on the middle band (skewed toward lower SoC on ties). This is the
/// span a centered DoD swing is counted against in cycle-test reconstruction.
std::pair<int, int> centered_band_span(double dod, int band_count);

/// Assembles the cycle-test pattern system for one current rate. Row i carries
/// T_b * p_i in the columns of record i's centered band span; rows whose span
/// disagrees with the closed-interval rule are listed in coverage_divergences.
/// Throws IllPosedSystem when the matrix is column-rank deficient.
PatternSystem build_pattern_system(const CycleTestSet& test);

/// Block-diagonal assembly of per-rate systems; rates must be distinct and
/// cell capacities equal.
PatternSystem assemble_multirate(const std::vector<PatternSystem>& systems);

/// Raw constructor for generic discretized usage logs: weighted visit counts
/// per (band, rate) stimulus directly, bypassing the cycle-test generator.
PatternSystem make_pattern_system(linalg::Matrix matrix_hours,
                                  std::vector<double> rhs_ah,
                                  std::vector<ColumnLabel> column_labels,
                                  double cell_capacity_ah);

}  // namespace degmap
