#include "symband/dense.hpp"

#include <cmath>

namespace symband {

DenseMat dense_mul(const DenseMat& x, const DenseMat& y) {
  if (x.cols != y.rows) throw DimensionError("dense_mul mismatch");
  DenseMat r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const double v = x(i, k);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
    }
  return r;
}

DenseMat dense_mul_tn(const DenseMat& x, const DenseMat& y) {
  if (x.rows != y.rows) throw DimensionError("dense_mul_tn mismatch");
  DenseMat r(x.cols, y.cols);
  for (std::size_t k = 0; k < x.rows; ++k)
    for (std::size_t i = 0; i < x.cols; ++i) {
      const double v = x(k, i);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
    }
  return r;
}

DenseMat dense_mul_nt(const DenseMat& x, const DenseMat& y) {
  if (x.cols != y.cols) throw DimensionError("dense_mul_nt mismatch");
  DenseMat r(x.rows, y.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < y.rows; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < x.cols; ++k) acc += x(i, k) * y(j, k);
      r(i, j) = acc;
    }
  return r;
}

DenseMat dense_transpose(const DenseMat& x) {
  DenseMat r(x.cols, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) r(j, i) = x(i, j);
  return r;
}

DenseMat dense_cholesky(const DenseMat& s) {
  if (s.rows != s.cols) throw DimensionError("cholesky needs square block");
  const std::size_t n = s.rows;
  DenseMat l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0.0)
      throw NotPositiveDefiniteError("block Cholesky pivot <= 0");
    const double lj = std::sqrt(d);
    l(j, j) = lj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / lj;
    }
  }
  return l;
}

void solve_lower_inplace(const DenseMat& l, DenseMat& x) {
  if (l.rows != x.rows) throw DimensionError("solve_lower mismatch");
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) {
      double v = x(i, j);
      for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * x(k, j);
      x(i, j) = v / l(i, i);
    }
}

void solve_lower_trans_inplace(const DenseMat& l, DenseMat& x) {
  if (l.rows != x.rows) throw DimensionError("solve_lower_trans mismatch");
  for (std::size_t ii = x.rows; ii-- > 0;)
    for (std::size_t j = 0; j < x.cols; ++j) {
      double v = x(ii, j);
      for (std::size_t k = ii + 1; k < x.rows; ++k) v -= l(k, ii) * x(k, j);
      x(ii, j) = v / l(ii, ii);
    }
}

void solve_right_lower_trans_inplace(const DenseMat& l, DenseMat& x) {
  // X <- X L^{-T}:  X L^{-T} = (L^{-1} X^T)^T, done column by column.
  if (l.rows != x.cols) throw DimensionError("solve_right_lower_trans mismatch");
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) {
      double v = x(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= x(i, k) * l(j, k);
      x(i, j) = v / l(j, j);
    }
}

} // namespace symband
