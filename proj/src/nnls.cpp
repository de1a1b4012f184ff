#include "degmap/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "degmap/error.hpp"

namespace degmap {

namespace {

// Unconstrained least squares restricted to the passive column set.
linalg::Vector passive_solve(const linalg::Matrix& m, const linalg::Vector& q,
                             const std::vector<int>& passive) {
  linalg::Matrix sub(m.rows(), static_cast<int>(passive.size()));
  for (int i = 0; i < m.rows(); ++i)
    for (size_t k = 0; k < passive.size(); ++k) sub(i, static_cast<int>(k)) = m(i, passive[k]);
  return linalg::solve_least_squares(sub, q);
}

}  // namespace

NnlsSolution solve_nnls(const linalg::Matrix& m_in, const std::vector<double>& q,
                        double tol) {
  require(!m_in.empty(), ErrorKind::InvalidArgument, "empty system");
  require(static_cast<int>(q.size()) == m_in.rows(), ErrorKind::InvalidArgument,
          "rhs length must match row count");
  require(tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be > 0");

  const int n = m_in.cols();

  // Scale columns to unit norm; Table-style data mixes magnitudes of 1e3..1e5
  // in the matrix against 1e-1 in the rhs.
  linalg::Matrix m = m_in;
  std::vector<double> col_scale(n, 1.0);
  for (int j = 0; j < n; ++j) {
    double nrm = linalg::column_norm(m, j);
    require(nrm > 0.0, ErrorKind::InvalidArgument, "zero column in system matrix");
    col_scale[j] = nrm;
    for (int i = 0; i < m.rows(); ++i) m(i, j) /= nrm;
  }

  const double w_tol = tol * std::max(1.0, linalg::norm2(q));
  const int max_iterations = 10 * n;

  std::vector<bool> passive(n, false);
  linalg::Vector x(n, 0.0);  // scaled solution
  int iterations = 0;

  auto gradient = [&](const linalg::Vector& xv) {
    linalg::Vector r = linalg::multiply(m, xv);
    for (int i = 0; i < m.rows(); ++i) r[i] = q[i] - r[i];
    return linalg::multiply_transposed(m, r);  // w = M^T (q - M x)
  };

  while (true) {
    linalg::Vector w = gradient(x);
    int best = -1;
    double best_w = w_tol;
    for (int j = 0; j < n; ++j)
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    if (best < 0) break;  // KKT satisfied

    if (++iterations > max_iterations)
      fail(ErrorKind::SolverFailure,
           "NNLS did not converge within " + std::to_string(max_iterations) +
               " iterations (max gradient " + std::to_string(best_w) + ")");
    passive[best] = true;

    while (true) {
      std::vector<int> passive_idx;
      for (int j = 0; j < n; ++j)
        if (passive[j]) passive_idx.push_back(j);

      linalg::Vector z = passive_solve(m, q, passive_idx);
      bool all_positive = true;
      for (double v : z)
        if (v <= 0.0) {
          all_positive = false;
          break;
        }
      if (all_positive) {
        std::fill(x.begin(), x.end(), 0.0);
        for (size_t k = 0; k < passive_idx.size(); ++k) x[passive_idx[k]] = z[k];
        break;
      }

      // Step toward z only as far as feasibility allows, then drop the
      // blocking variables back to the active set.
      double alpha = 1.0;
      for (size_t k = 0; k < passive_idx.size(); ++k) {
        if (z[k] > 0.0) continue;
        double xj = x[passive_idx[k]];
        double a = xj / (xj - z[k]);
        alpha = std::min(alpha, a);
      }
      for (size_t k = 0; k < passive_idx.size(); ++k) {
        int j = passive_idx[k];
        x[j] += alpha * (z[k] - x[j]);
      }
      for (int j : passive_idx)
        if (x[j] <= 1e-15) {
          x[j] = 0.0;
          passive[j] = false;
        }
      if (++iterations > max_iterations)
        fail(ErrorKind::SolverFailure,
             "NNLS inner loop exceeded " + std::to_string(max_iterations) +
                 " iterations");
    }
  }

  NnlsSolution sol;
  sol.x.resize(n);
  for (int j = 0; j < n; ++j) sol.x[j] = x[j] / col_scale[j];
  linalg::Vector r = linalg::multiply(m_in, sol.x);
  for (int i = 0; i < m_in.rows(); ++i) r[i] -= q[i];
  sol.residual_norm = linalg::norm2(r);
  for (int j = 0; j < n; ++j)
    if (!passive[j]) sol.active_set.push_back(j);
  sol.iterations = iterations;
  return sol;
}

NnlsSolution solve_nnls(const PatternSystem& system, double tol) {
  return solve_nnls(system.matrix, system.rhs_ah, tol);
}

namespace {

double interp_clamped(const std::vector<double>& xs, const std::vector<double>& ys,
                      double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  size_t hi = static_cast<size_t>(it - xs.begin());
  size_t lo = hi - 1;
  double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return (1.0 - t) * ys[lo] + t * ys[hi];
}

}  // namespace

IdentifiedMap solve_map(const PatternSystem& system, double tol) {
  NnlsSolution solution = solve_nnls(system, tol);

  // Group solution entries by current rate, preserving per-rate band axes.
  std::map<double, MapSlice> by_rate;
  for (size_t j = 0; j < system.column_labels.size(); ++j) {
    const ColumnLabel& label = system.column_labels[j];
    MapSlice& slice = by_rate[label.current_rate_a];
    slice.current_rate_a = label.current_rate_a;
    slice.soc_centers.push_back(label.soc_band_center);
    slice.side_current.push_back(solution.x[j]);
  }

  std::vector<MapSlice> slices;
  for (auto& [rate, slice] : by_rate) {
    std::vector<size_t> order(slice.soc_centers.size());
    for (size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return slice.soc_centers[a] < slice.soc_centers[b];
    });
    MapSlice sorted;
    sorted.current_rate_a = rate;
    for (size_t k : order) {
      sorted.soc_centers.push_back(slice.soc_centers[k]);
      sorted.side_current.push_back(slice.side_current[k]);
    }
    slices.push_back(std::move(sorted));
  }

  // Common SoC axis = union of all per-rate centers (exact-duplicate merge).
  std::vector<double> union_centers;
  for (const MapSlice& slice : slices)
    union_centers.insert(union_centers.end(), slice.soc_centers.begin(),
                         slice.soc_centers.end());
  std::sort(union_centers.begin(), union_centers.end());
  union_centers.erase(std::unique(union_centers.begin(), union_centers.end()),
                      union_centers.end());

  std::vector<double> rates;
  for (const MapSlice& slice : slices) rates.push_back(slice.current_rate_a);

  linalg::Matrix values(static_cast<int>(union_centers.size()),
                        static_cast<int>(rates.size()));
  for (size_t j = 0; j < slices.size(); ++j)
    for (size_t i = 0; i < union_centers.size(); ++i)
      values(static_cast<int>(i), static_cast<int>(j)) =
          interp_clamped(slices[j].soc_centers, slices[j].side_current,
                         union_centers[i]);

  DegradationMap map(SocGrid(union_centers), CurrentGrid(rates), std::move(values),
                     system.cell_capacity_ah);
  return IdentifiedMap{std::move(map), std::move(slices), std::move(solution)};
}

}  // namespace degmap
