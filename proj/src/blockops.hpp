#pragma once

#include <cmath>

#include "symband/dense.hpp"

namespace symband::detail {

/// QL-type Householder reduction: overwrites M (p x q, p >= q) with Qt*M,
/// which is zero above the bottom q x q lower triangle, and returns Qt.
inline DenseMat ql_reflect(DenseMat& m) {
  const std::size_t p = m.rows, q = m.cols;
  DenseMat qt = DenseMat::eye(p);
  if (p < q) throw DimensionError("ql_reflect needs rows >= cols");
  std::vector<double> v(p);
  for (std::size_t jj = q; jj-- > 0;) {
    const std::size_t r = p - q + jj; // pivot row for column jj
    double nrm = 0.0;
    for (std::size_t i = 0; i <= r; ++i) nrm += m(i, jj) * m(i, jj);
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) continue;
    double head = 0.0;
    for (std::size_t i = 0; i < r; ++i) head += m(i, jj) * m(i, jj);
    if (head == 0.0) continue; // already eliminated
    const double alpha = m(r, jj) >= 0.0 ? -nrm : nrm;
    double vtv = 0.0;
    for (std::size_t i = 0; i <= r; ++i) {
      v[i] = m(i, jj) - (i == r ? alpha : 0.0);
      vtv += v[i] * v[i];
    }
    if (vtv == 0.0) continue;
    const double beta = 2.0 / vtv;
    for (std::size_t c = 0; c <= jj; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i <= r; ++i) s += v[i] * m(i, c);
      s *= beta;
      for (std::size_t i = 0; i <= r; ++i) m(i, c) -= s * v[i];
    }
    for (std::size_t i = 0; i < r; ++i) m(i, jj) = 0.0;
    m(r, jj) = alpha;
    for (std::size_t c = 0; c < p; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i <= r; ++i) s += v[i] * qt(i, c);
      s *= beta;
      for (std::size_t i = 0; i <= r; ++i) qt(i, c) -= s * v[i];
    }
  }
  return qt;
}

} // namespace symband::detail
