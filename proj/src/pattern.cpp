#include "degmap/pattern.hpp"

#include <algorithm>
#include <cmath>

#include "degmap/error.hpp"

namespace degmap {

CycleTestSet::CycleTestSet(double i_bat_a, double cell_capacity_ah,
                           std::vector<CycleTestRecord> records, SocGrid soc_grid)
    : i_bat_a_(i_bat_a),
      cell_capacity_ah_(cell_capacity_ah),
      records_(std::move(records)),
      soc_grid_(std::move(soc_grid)) {
  require(i_bat_a_ > 0.0 && std::isfinite(i_bat_a_), ErrorKind::InvalidArgument,
          "battery current must be > 0");
  require(cell_capacity_ah_ > 0.0 && std::isfinite(cell_capacity_ah_),
          ErrorKind::InvalidArgument, "cell capacity must be > 0");
  for (const CycleTestRecord& r : records_) {
    require(r.dod > 0.0 && r.dod <= 1.0, ErrorKind::InvalidArgument,
            "DoD must lie in (0,1]");
    require(r.n_cyc > 0.0 && std::isfinite(r.n_cyc), ErrorKind::InvalidArgument,
            "cycle count must be > 0");
    require(r.q_s_ah > 0.0 && std::isfinite(r.q_s_ah), ErrorKind::InvalidArgument,
            "lost charge must be > 0");
  }
  std::stable_sort(records_.begin(), records_.end(),
                   [](const CycleTestRecord& a, const CycleTestRecord& b) {
                     return a.dod < b.dod;
                   });
  require(static_cast<int>(records_.size()) >= soc_grid_.band_count(),
          ErrorKind::InvalidArgument,
          "need at least as many measurements as SoC bands");
}

double pattern_count(const CycleTestRecord& record) {
  require(record.dod > 0.0, ErrorKind::InvalidArgument, "DoD must be > 0");
  return 2.0 * record.n_cyc / record.dod;
}

double band_traverse_time_h(double cell_capacity_ah, double i_bat_a, int band_count) {
  require(cell_capacity_ah > 0.0, ErrorKind::InvalidArgument, "cell capacity must be > 0");
  require(i_bat_a > 0.0, ErrorKind::InvalidArgument, "battery current must be > 0");
  require(band_count >= 1, ErrorKind::InvalidArgument, "band count must be >= 1");
  return cell_capacity_ah / (i_bat_a * band_count);
}

std::vector<int> covered_bands(double dod, const SocGrid& soc_grid) {
  require(dod > 0.0 && dod <= 1.0, ErrorKind::InvalidArgument, "DoD must lie in (0,1]");
  const double lo = 0.5 - dod / 2.0;
  const double hi = 0.5 + dod / 2.0;
  std::vector<int> out;
  const auto& centers = soc_grid.band_centers();
  for (int l = 0; l < static_cast<int>(centers.size()); ++l)
    if (centers[l] >= lo && centers[l] <= hi) out.push_back(l);
  if (out.empty())
    fail(ErrorKind::DegenerateCoverage,
         "DoD swing covers no SoC band center; refine the grid or widen the swing");
  return out;
}

std::pair<int, int> centered_band_span(double dod, int band_count) {
  require(dod > 0.0 && dod <= 1.0, ErrorKind::InvalidArgument, "DoD must lie in (0,1]");
  require(band_count >= 1, ErrorKind::InvalidArgument, "band count must be >= 1");
  int span = static_cast<int>(std::floor(dod * band_count)) + 1;
  span = std::min(span, band_count);
  // 1-based: first = floor((n + 2 - span) / 2), so odd leftovers go low.
  int first = (band_count + 2 - span) / 2;
  return {first - 1, first - 1 + span - 1};
}

PatternSystem build_pattern_system(const CycleTestSet& test) {
  const SocGrid& grid = test.soc_grid();
  const int n_bd = grid.band_count();
  const int n_m = static_cast<int>(test.records().size());
  const double t_b = band_traverse_time_h(test.cell_capacity_ah(), test.i_bat_a(), n_bd);

  PatternSystem sys;
  sys.matrix = linalg::Matrix(n_m, n_bd);
  sys.rhs_ah.resize(n_m);
  sys.cell_capacity_ah = test.cell_capacity_ah();
  for (int l = 0; l < n_bd; ++l)
    sys.column_labels.push_back({grid.band_centers()[l], test.i_bat_a()});

  for (int i = 0; i < n_m; ++i) {
    const CycleTestRecord& rec = test.records()[i];
    const std::vector<int> interval_cover = covered_bands(rec.dod, grid);
    const auto [first, last] = centered_band_span(rec.dod, n_bd);
    const double entry = t_b * pattern_count(rec);
    for (int l = first; l <= last; ++l) sys.matrix(i, l) = entry;
    sys.rhs_ah[i] = rec.q_s_ah;

    bool same = static_cast<int>(interval_cover.size()) == last - first + 1 &&
                interval_cover.front() == first && interval_cover.back() == last;
    if (!same) sys.coverage_divergences.push_back(i);
  }

  if (linalg::numeric_rank(sys.matrix) < n_bd)
    fail(ErrorKind::IllPosedSystem,
         "pattern matrix is column-rank deficient; side currents are not identifiable");
  return sys;
}

PatternSystem assemble_multirate(const std::vector<PatternSystem>& systems) {
  require(!systems.empty(), ErrorKind::InvalidArgument,
          "need at least one pattern system");
  if (systems.size() == 1) return systems.front();

  std::vector<double> rates;
  int rows = 0, cols = 0;
  for (const PatternSystem& s : systems) {
    require(!s.column_labels.empty(), ErrorKind::InvalidArgument,
            "pattern system without columns");
    double rate = s.column_labels.front().current_rate_a;
    for (const ColumnLabel& label : s.column_labels)
      require(label.current_rate_a == rate, ErrorKind::InvalidArgument,
              "multirate blocks must each hold a single current rate");
    for (double r : rates)
      require(r != rate, ErrorKind::InvalidArgument,
              "duplicate current rate across multirate blocks");
    rates.push_back(rate);
    require(s.cell_capacity_ah == systems.front().cell_capacity_ah,
            ErrorKind::InvalidArgument,
            "multirate blocks must share one cell capacity");
    rows += s.matrix.rows();
    cols += s.matrix.cols();
  }

  PatternSystem out;
  out.matrix = linalg::Matrix(rows, cols);
  out.rhs_ah.reserve(rows);
  out.cell_capacity_ah = systems.front().cell_capacity_ah;
  int row0 = 0, col0 = 0;
  for (const PatternSystem& s : systems) {
    for (int i = 0; i < s.matrix.rows(); ++i)
      for (int j = 0; j < s.matrix.cols(); ++j)
        out.matrix(row0 + i, col0 + j) = s.matrix(i, j);
    for (double q : s.rhs_ah) out.rhs_ah.push_back(q);
    for (const ColumnLabel& label : s.column_labels) out.column_labels.push_back(label);
    for (int idx : s.coverage_divergences) out.coverage_divergences.push_back(row0 + idx);
    row0 += s.matrix.rows();
    col0 += s.matrix.cols();
  }
  return out;
}

PatternSystem make_pattern_system(linalg::Matrix matrix_hours,
                                  std::vector<double> rhs_ah,
                                  std::vector<ColumnLabel> column_labels,
                                  double cell_capacity_ah) {
  require(matrix_hours.rows() == static_cast<int>(rhs_ah.size()),
          ErrorKind::InvalidArgument, "row count must match rhs length");
  require(matrix_hours.cols() == static_cast<int>(column_labels.size()),
          ErrorKind::InvalidArgument, "column count must match labels");
  require(cell_capacity_ah > 0.0, ErrorKind::InvalidArgument,
          "cell capacity must be > 0");
  for (double v : matrix_hours.data())
    require(std::isfinite(v) && v >= 0.0, ErrorKind::InvalidArgument,
            "pattern matrix entries must be finite and >= 0");
  PatternSystem sys;
  sys.matrix = std::move(matrix_hours);
  sys.rhs_ah = std::move(rhs_ah);
  sys.column_labels = std::move(column_labels);
  sys.cell_capacity_ah = cell_capacity_ah;
  return sys;
}

}  // namespace degmap
