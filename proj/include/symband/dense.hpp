#pragma once

#include <cstddef>
#include <vector>

#include "symband/errors.hpp"

namespace symband {

/// Small row-major dense matrix used for eigenvector accumulation, window
/// solves, and the factor-chain blocks. Not a general linear algebra type.
struct DenseMat {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  DenseMat() = default;
  DenseMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  static DenseMat eye(std::size_t n) {
    DenseMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  bool empty() const { return rows == 0 || cols == 0; }

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a[i * cols + j];
  }
};

DenseMat dense_mul(const DenseMat& x, const DenseMat& y);
/// x^T * y
DenseMat dense_mul_tn(const DenseMat& x, const DenseMat& y);
/// x * y^T
DenseMat dense_mul_nt(const DenseMat& x, const DenseMat& y);
DenseMat dense_transpose(const DenseMat& x);

/// Lower-triangular Cholesky factor of a symmetric positive-definite block.
DenseMat dense_cholesky(const DenseMat& s);

/// X <- L^{-1} X and X <- L^{-T} X for lower-triangular L.
void solve_lower_inplace(const DenseMat& l, DenseMat& x);
void solve_lower_trans_inplace(const DenseMat& l, DenseMat& x);
/// X <- X L^{-T} for lower-triangular L.
void solve_right_lower_trans_inplace(const DenseMat& l, DenseMat& x);

} // namespace symband
