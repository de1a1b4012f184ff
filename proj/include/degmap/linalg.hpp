#pragma once

#include <cstddef>
#include <vector>

namespace degmap::linalg {

using Vector = std::vector<double>;

/// Dense row-major matrix. Small systems only; no view machinery.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool empty() const { return rows_ == 0 || cols_ == 0; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Vector multiply(const Matrix& a, const Vector& x);
Vector multiply_transposed(const Matrix& a, const Vector& y);

double norm2(const Vector& v);
double column_norm(const Matrix& a, int col);

/// Minimum-residual solution of an overdetermined (or square) system via
/// Householder QR. Requires rows >= cols and numerically full column rank.
Vector solve_least_squares(const Matrix& a, const Vector& b);

/// Square solve with partial pivoting. Throws on singular input.
Vector solve_square(Matrix a, Vector b);

/// Rank estimate by Gaussian elimination with full pivoting; the tolerance is
/// relative to the largest pivot encountered.
int numeric_rank(Matrix a, double rel_tol = 1e-10);

}  // namespace degmap::linalg
