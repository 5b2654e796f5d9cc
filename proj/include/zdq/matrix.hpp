#pragma once

#include <vector>

#include "zdq/errors.hpp"

namespace zdq {

// Dense row-major matrix of doubles. Small sizes only (alphabets, grids of
// coupling pairs); heavy linear algebra is delegated to Eigen internally.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<double>>& rows_in) {
    if (rows_in.empty()) fail(errc::dimension_mismatch, "matrix with no rows");
    Matrix m(static_cast<int>(rows_in.size()), static_cast<int>(rows_in[0].size()));
    for (int r = 0; r < m.rows; ++r) {
      if (static_cast<int>(rows_in[r].size()) != m.cols)
        fail(errc::dimension_mismatch, "ragged matrix rows");
      for (int c = 0; c < m.cols; ++c) m.at(r, c) = rows_in[r][c];
    }
    return m;
  }

  bool operator==(const Matrix&) const = default;
};

// Throws unless every row of `m` is a probability vector: entries in [0,1]
// and row sums within `tol` of one.
void check_row_stochastic(const Matrix& m, double tol, const char* what);

}  // namespace zdq
