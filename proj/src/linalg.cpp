#include "degmap/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "degmap/error.hpp"

namespace degmap::linalg {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector multiply(const Matrix& a, const Vector& x) {
  require(static_cast<int>(x.size()) == a.cols(), ErrorKind::InvalidArgument,
          "matrix-vector size mismatch");
  Vector y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Vector multiply_transposed(const Matrix& a, const Vector& y) {
  require(static_cast<int>(y.size()) == a.rows(), ErrorKind::InvalidArgument,
          "matrix-vector size mismatch");
  Vector x(a.cols(), 0.0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) x[j] += a(i, j) * y[i];
  return x;
}

double norm2(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double column_norm(const Matrix& a, int col) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i) s += a(i, col) * a(i, col);
  return std::sqrt(s);
}

Vector solve_least_squares(const Matrix& a, const Vector& b) {
  const int m = a.rows();
  const int n = a.cols();
  require(m >= n && n > 0, ErrorKind::InvalidArgument,
          "least squares requires rows >= cols > 0");
  require(static_cast<int>(b.size()) == m, ErrorKind::InvalidArgument,
          "rhs size mismatch");

  Matrix r = a;
  Vector qtb = b;

  // Householder QR, transformations applied to the rhs in place.
  for (int k = 0; k < n; ++k) {
    double alpha = 0.0;
    for (int i = k; i < m; ++i) alpha += r(i, k) * r(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0)
      fail(ErrorKind::IllPosedSystem, "rank-deficient matrix in least squares");
    if (r(k, k) > 0.0) alpha = -alpha;

    Vector v(m - k);
    v[0] = r(k, k) - alpha;
    for (int i = k + 1; i < m; ++i) v[i - k] = r(i, k);
    double vnorm2 = 0.0;
    for (double x : v) vnorm2 += x * x;
    if (vnorm2 == 0.0)
      fail(ErrorKind::IllPosedSystem, "rank-deficient matrix in least squares");

    for (int j = k; j < n; ++j) {
      double dot = 0.0;
      for (int i = k; i < m; ++i) dot += v[i - k] * r(i, j);
      double f = 2.0 * dot / vnorm2;
      for (int i = k; i < m; ++i) r(i, j) -= f * v[i - k];
    }
    double dot = 0.0;
    for (int i = k; i < m; ++i) dot += v[i - k] * qtb[i];
    double f = 2.0 * dot / vnorm2;
    for (int i = k; i < m; ++i) qtb[i] -= f * v[i - k];
  }

  Vector x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = qtb[i];
    for (int j = i + 1; j < n; ++j) s -= r(i, j) * x[j];
    if (r(i, i) == 0.0)
      fail(ErrorKind::IllPosedSystem, "zero pivot in back substitution");
    x[i] = s / r(i, i);
  }
  return x;
}

Vector solve_square(Matrix a, Vector b) {
  const int n = a.rows();
  require(a.cols() == n && static_cast<int>(b.size()) == n,
          ErrorKind::InvalidArgument, "square solve size mismatch");
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == 0.0)
      fail(ErrorKind::IllPosedSystem, "singular matrix in square solve");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  Vector x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

int numeric_rank(Matrix a, double rel_tol) {
  const int m = a.rows();
  const int n = a.cols();
  int rank = 0;
  double max_pivot = 0.0;
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int pr = row, pc = col;
    double best = 0.0;
    for (int i = row; i < m; ++i)
      for (int j = col; j < n; ++j)
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          pr = i;
          pc = j;
        }
    max_pivot = std::max(max_pivot, best);
    if (best <= rel_tol * std::max(max_pivot, 1e-300)) break;
    if (pr != row)
      for (int j = 0; j < n; ++j) std::swap(a(row, j), a(pr, j));
    if (pc != col)
      for (int i = 0; i < m; ++i) std::swap(a(i, col), a(i, pc));
    for (int i = row + 1; i < m; ++i) {
      double f = a(i, col) / a(row, col);
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a(i, j) -= f * a(row, j);
    }
    ++rank;
    ++row;
  }
  return rank;
}

}  // namespace degmap::linalg
