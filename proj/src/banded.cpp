#include "symband/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace symband {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

BandedMatrix::BandedMatrix(std::size_t rows, std::size_t cols, int lower,
                           int upper)
    : rows_(rows), cols_(cols), lower_(lower), upper_(upper),
      width_(lower + upper + 1) {
  if (lower + upper < 0)
    throw DimensionError("banded matrix needs lower + upper >= 0");
  data_.assign(static_cast<std::size_t>(width_) * cols_, 0.0);
}

BandedMatrix BandedMatrix::identity(std::size_t n) {
  BandedMatrix m(n, n, 0, 0);
  for (std::size_t j = 0; j < n; ++j) m.at(j, j) = 1.0;
  return m;
}

void BandedMatrix::set(std::size_t i, std::size_t j, double v) {
  if (i >= rows_ || j >= cols_)
    throw DimensionError("banded set out of range");
  if (!in_band(i, j)) {
    if (v == 0.0) return;
    throw OutOfBandWrite("nonzero write outside declared band");
  }
  data_[idx(i, j)] = v;
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
  if (i >= rows_ || j >= cols_ || !in_band(i, j))
    throw OutOfBandWrite("banded at() outside band");
  return data_[idx(i, j)];
}

std::size_t BandedMatrix::col_begin(std::size_t j) const {
  const long lo = static_cast<long>(j) - upper_;
  return lo > 0 ? static_cast<std::size_t>(lo) : 0;
}

std::size_t BandedMatrix::col_end(std::size_t j) const {
  const long hi = static_cast<long>(j) + lower_ + 1;
  if (hi <= 0) return 0;
  return std::min<std::size_t>(rows_, static_cast<std::size_t>(hi));
}

std::size_t BandedMatrix::row_begin(std::size_t i) const {
  const long lo = static_cast<long>(i) - lower_;
  return lo > 0 ? static_cast<std::size_t>(lo) : 0;
}

std::size_t BandedMatrix::row_end(std::size_t i) const {
  const long hi = static_cast<long>(i) + upper_ + 1;
  if (hi <= 0) return 0;
  return std::min<std::size_t>(cols_, static_cast<std::size_t>(hi));
}

double BandedMatrix::frobenius_norm() const {
  double s = 0.0;
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = col_begin(j); i < col_end(j); ++i) {
      const double v = data_[idx(i, j)];
      s += v * v;
    }
  return std::sqrt(s);
}

double BandedMatrix::inf_norm() const {
  std::vector<double> rowsum(rows_, 0.0);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = col_begin(j); i < col_end(j); ++i)
      rowsum[i] += std::abs(data_[idx(i, j)]);
  double m = 0.0;
  for (double r : rowsum) m = std::max(m, r);
  return m;
}

BandedMatrix BandedMatrix::transpose() const {
  BandedMatrix t(cols_, rows_, upper_, lower_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = col_begin(j); i < col_end(j); ++i)
      t.at(j, i) = data_[idx(i, j)];
  return t;
}

std::vector<double> BandedMatrix::apply(std::span<const double> x) const {
  if (x.size() != cols_) throw DimensionError("banded apply size mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t j = 0; j < cols_; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (std::size_t i = col_begin(j); i < col_end(j); ++i)
      y[i] += data_[idx(i, j)] * xj;
  }
  return y;
}

std::vector<double> BandedMatrix::apply_transpose(
    std::span<const double> x) const {
  if (x.size() != rows_)
    throw DimensionError("banded apply_transpose size mismatch");
  std::vector<double> y(cols_, 0.0);
  for (std::size_t j = 0; j < cols_; ++j) {
    double acc = 0.0;
    for (std::size_t i = col_begin(j); i < col_end(j); ++i)
      acc += data_[idx(i, j)] * x[i];
    y[j] = acc;
  }
  return y;
}

BandedMatrix BandedMatrix::multiply(const BandedMatrix& a,
                                    const BandedMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("banded multiply mismatch");
  BandedMatrix r(a.rows_, b.cols_, a.lower_ + b.lower_, a.upper_ + b.upper_);
  for (std::size_t j = 0; j < b.cols_; ++j) {
    for (std::size_t k = b.col_begin(j); k < b.col_end(j); ++k) {
      const double bkj = b.data_[b.idx(k, j)];
      if (bkj == 0.0) continue;
      for (std::size_t i = a.col_begin(k); i < a.col_end(k); ++i)
        r.data_[r.idx(i, j)] += a.data_[a.idx(i, k)] * bkj;
    }
  }
  return r;
}

BandedMatrix BandedMatrix::add(const BandedMatrix& a, const BandedMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw DimensionError("banded add mismatch");
  BandedMatrix r(a.rows_, a.cols_, std::max(a.lower_, b.lower_),
                 std::max(a.upper_, b.upper_));
  for (std::size_t j = 0; j < a.cols_; ++j) {
    for (std::size_t i = a.col_begin(j); i < a.col_end(j); ++i)
      r.at(i, j) = a.get(i, j);
    for (std::size_t i = b.col_begin(j); i < b.col_end(j); ++i)
      r.at(i, j) += b.get(i, j);
  }
  return r;
}

void BandedMatrix::scale(double s) {
  for (double& v : data_) v *= s;
}

BandedMatrix BandedMatrix::section(std::size_t r, std::size_t c) const {
  BandedMatrix out(r, c, lower_, upper_);
  for (std::size_t j = 0; j < std::min(c, cols_); ++j)
    for (std::size_t i = col_begin(j); i < std::min(col_end(j), r); ++i)
      out.at(i, j) = data_[idx(i, j)];
  return out;
}

std::vector<double> BandedMatrix::dense() const {
  std::vector<double> d(rows_ * cols_, 0.0);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = col_begin(j); i < col_end(j); ++i)
      d[i * cols_ + j] = data_[idx(i, j)];
  return d;
}

SymBanded::SymBanded(std::size_t dim, int half_bandwidth)
    : dim_(dim), bw_(half_bandwidth) {
  if (bw_ < 0) throw DimensionError("negative half-bandwidth");
  data_.assign(static_cast<std::size_t>(bw_ + 1) * dim_, 0.0);
}

SymBanded SymBanded::identity(std::size_t n) {
  SymBanded s(n, 0);
  for (std::size_t j = 0; j < n; ++j) s.at_lower(j, j) = 1.0;
  return s;
}

void SymBanded::set(std::size_t i, std::size_t j, double v) {
  if (i < j) std::swap(i, j);
  if (i >= dim_) throw DimensionError("symbanded set out of range");
  if (i - j > static_cast<std::size_t>(bw_)) {
    if (v == 0.0) return;
    throw OutOfBandWrite("nonzero write outside symmetric band");
  }
  data_[idx(i, j)] = v;
}

double& SymBanded::at_lower(std::size_t i, std::size_t j) {
  if (i < j) std::swap(i, j);
  if (i >= dim_ || i - j > static_cast<std::size_t>(bw_))
    throw OutOfBandWrite("symbanded at_lower outside band");
  return data_[idx(i, j)];
}

double SymBanded::inf_norm() const {
  std::vector<double> rowsum(dim_, 0.0);
  for (std::size_t j = 0; j < dim_; ++j) {
    const std::size_t iend = std::min(dim_, j + bw_ + 1);
    for (std::size_t i = j; i < iend; ++i) {
      const double a = std::abs(data_[idx(i, j)]);
      rowsum[i] += a;
      if (i != j) rowsum[j] += a;
    }
  }
  double m = 0.0;
  for (double r : rowsum) m = std::max(m, r);
  return m;
}

double SymBanded::frobenius_norm() const {
  double s = 0.0;
  for (std::size_t j = 0; j < dim_; ++j) {
    const std::size_t iend = std::min(dim_, j + bw_ + 1);
    for (std::size_t i = j; i < iend; ++i) {
      const double v = data_[idx(i, j)];
      s += (i == j) ? v * v : 2.0 * v * v;
    }
  }
  return std::sqrt(s);
}

double SymBanded::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> SymBanded::apply(std::span<const double> x) const {
  if (x.size() != dim_) throw DimensionError("symbanded apply mismatch");
  std::vector<double> y(dim_, 0.0);
  for (std::size_t j = 0; j < dim_; ++j) {
    const std::size_t iend = std::min(dim_, j + bw_ + 1);
    y[j] += data_[idx(j, j)] * x[j];
    for (std::size_t i = j + 1; i < iend; ++i) {
      const double v = data_[idx(i, j)];
      y[i] += v * x[j];
      y[j] += v * x[i];
    }
  }
  return y;
}

SymBanded SymBanded::section(std::size_t n) const {
  SymBanded s(std::min(n, dim_), bw_);
  for (std::size_t j = 0; j < s.dim(); ++j) {
    const std::size_t iend = std::min(s.dim(), j + bw_ + 1);
    for (std::size_t i = j; i < iend; ++i)
      s.at_lower(i, j) = data_[idx(i, j)];
  }
  return s;
}

SymBanded SymBanded::with_bandwidth(int new_bw) const {
  SymBanded s(dim_, new_bw);
  const int keep = std::min(new_bw, bw_);
  for (std::size_t j = 0; j < dim_; ++j) {
    const std::size_t iend = std::min(dim_, j + keep + 1);
    for (std::size_t i = j; i < iend; ++i)
      s.at_lower(i, j) = data_[idx(i, j)];
  }
  if (new_bw < bw_) {
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t i = j + new_bw + 1; i < std::min(dim_, j + bw_ + 1); ++i)
        if (data_[idx(i, j)] != 0.0)
          throw OutOfBandWrite("narrowing would drop nonzero band entries");
  }
  return s;
}

BandedMatrix SymBanded::to_banded() const {
  BandedMatrix m(dim_, dim_, bw_, bw_);
  for (std::size_t j = 0; j < dim_; ++j) {
    const std::size_t iend = std::min(dim_, j + bw_ + 1);
    for (std::size_t i = j; i < iend; ++i) {
      const double v = data_[idx(i, j)];
      m.at(i, j) = v;
      if (i != j) m.at(j, i) = v;
    }
  }
  return m;
}

std::vector<double> SymBanded::dense() const {
  std::vector<double> d(dim_ * dim_, 0.0);
  for (std::size_t j = 0; j < dim_; ++j) {
    const std::size_t iend = std::min(dim_, j + bw_ + 1);
    for (std::size_t i = j; i < iend; ++i) {
      const double v = data_[idx(i, j)];
      d[i * dim_ + j] = v;
      d[j * dim_ + i] = v;
    }
  }
  return d;
}

Pencil::Pencil(SymBanded a_in, SymBanded b_in)
    : a(std::move(a_in)), b(std::move(b_in)) {
  if (a.dim() != b.dim()) throw DimensionError("pencil dimension mismatch");
}

void GivensSequence::apply(std::span<double> x) const {
  for (auto it = rots_.rbegin(); it != rots_.rend(); ++it) {
    const double xp = x[it->p], xq = x[it->p + 1];
    x[it->p] = it->c * xp - it->s * xq;
    x[it->p + 1] = it->s * xp + it->c * xq;
  }
}

void GivensSequence::apply_transpose(std::span<double> x) const {
  for (const auto& g : rots_) {
    const double xp = x[g.p], xq = x[g.p + 1];
    x[g.p] = g.c * xp + g.s * xq;
    x[g.p + 1] = -g.s * xp + g.c * xq;
  }
}

BandQR band_qr(const BandedMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const int l = std::max(m.lower(), 0);
  const int u = std::max(m.upper(), 0);
  // Working array holds the fill created by the rotations.
  BandedMatrix w(rows, cols, l, u + l);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = m.col_begin(j); i < m.col_end(j); ++i)
      w.at(i, j) = m.get(i, j);

  GivensSequence q;
  for (std::size_t j = 0; j < cols; ++j) {
    const std::size_t bottom = std::min(rows - 1, j + static_cast<std::size_t>(l));
    for (std::size_t i = bottom; i > j; --i) {
      const double b = w.get(i, j);
      if (b == 0.0) continue;
      const double a = w.get(i - 1, j);
      const double r = std::hypot(a, b);
      const double c = a / r, s = b / r;
      // Rotate rows (i-1, i) over their joint column support.
      const std::size_t jend = std::min(cols, i + static_cast<std::size_t>(u + l) + 1);
      for (std::size_t k = j; k < jend; ++k) {
        const double vp = w.get(i - 1, k), vq = w.get(i, k);
        w.set(i - 1, k, c * vp + s * vq);
        w.set(i, k, -s * vp + c * vq);
      }
      q.push(i - 1, c, s);
    }
  }

  BandedMatrix r(rows, cols, 0, u + l);
  for (std::size_t j = 0; j < cols; ++j) {
    const std::size_t iend = std::min(j + 1, rows);
    for (std::size_t i = w.col_begin(j); i < iend; ++i)
      r.at(i, j) = w.get(i, j);
  }
  return {std::move(q), std::move(r)};
}

BandedMatrix tri_upper_partial_inverse(const BandedMatrix& c,
                                       int extra_upper) {
  if (c.rows() != c.cols())
    throw DimensionError("partial inverse needs a square matrix");
  if (c.lower() > 0)
    throw DimensionError("partial inverse needs an upper-triangular input");
  if (extra_upper < 0) throw DimensionError("extra_upper must be >= 0");
  const std::size_t n = c.rows();
  BandedMatrix p(n, n, 0, extra_upper);
  // Row i of C^{-1}: x_i..x_{i+extra} from x C = e_i^T. Only entries of
  // C^{-1} inside the requested band are touched, and those are exact.
  for (std::size_t i = 0; i < n; ++i) {
    const double cii = c.get(i, i);
    if (cii == 0.0)
      throw SingularConversionError("zero diagonal in conversion operator");
    p.at(i, i) = 1.0 / cii;
    const std::size_t jend = std::min(n, i + static_cast<std::size_t>(extra_upper) + 1);
    for (std::size_t j = i + 1; j < jend; ++j) {
      double acc = 0.0;
      const std::size_t mlo = std::max(i, c.col_begin(j));
      for (std::size_t mm = mlo; mm < j; ++mm)
        acc += p.get(i, mm) * c.get(mm, j);
      const double cjj = c.get(j, j);
      if (cjj == 0.0)
        throw SingularConversionError("zero diagonal in conversion operator");
      p.at(i, j) = -acc / cjj;
    }
  }
  return p;
}

LdltResult ldlt_banded(const SymBanded& s, double shift, const SymBanded* t) {
  const std::size_t n = s.dim();
  if (t && t->dim() != n) throw DimensionError("ldlt shift matrix mismatch");
  const int bw = t ? std::max(s.bandwidth(), t->bandwidth()) : s.bandwidth();

  SymBanded w(n, bw);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < std::min(n, j + bw + 1); ++i) {
      double v = s.get(i, j);
      if (t && shift != 0.0) v -= shift * t->get(i, j);
      w.at_lower(i, j) = v;
    }

  LdltResult res;
  res.d.assign(n, 0.0);
  res.l = BandedMatrix(n, n, bw, 0);

  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t klo = j > static_cast<std::size_t>(bw) ? j - bw : 0;
    double dj = w.get(j, j);
    for (std::size_t k = klo; k < j; ++k) {
      const double ljk = res.l.get(j, k);
      dj -= ljk * ljk * res.d[k];
    }
    if (dj == 0.0)
      throw BreakdownError("exact zero pivot in banded LDL^T");
    res.d[j] = dj;
    res.l.at(j, j) = 1.0;
    const std::size_t iend = std::min(n, j + bw + 1);
    for (std::size_t i = j + 1; i < iend; ++i) {
      double v = w.get(i, j);
      const std::size_t lo = i > static_cast<std::size_t>(bw) ? i - bw : 0;
      for (std::size_t k = std::max(lo, klo); k < j; ++k)
        v -= res.l.get(i, k) * res.l.get(j, k) * res.d[k];
      res.l.at(i, j) = v / dj;
    }
  }

  const double tol = kEps * s.inf_norm();
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(res.d[j]) <= tol)
      ++res.n_zero;
    else if (res.d[j] < 0.0)
      ++res.n_neg;
    else
      ++res.n_pos;
  }
  return res;
}

std::vector<double> LdltResult::solve(std::span<const double> rhs) const {
  const std::size_t n = d.size();
  if (rhs.size() != n) throw DimensionError("ldlt solve size mismatch");
  std::vector<double> x(rhs.begin(), rhs.end());
  // Forward: L y = rhs.
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (std::size_t i = j + 1; i < l.col_end(j); ++i)
      x[i] -= l.get(i, j) * xj;
  }
  for (std::size_t j = 0; j < n; ++j) x[j] /= d[j];
  // Backward: L^T z = y.
  for (std::size_t j = n; j-- > 0;) {
    double acc = x[j];
    for (std::size_t i = j + 1; i < l.col_end(j); ++i)
      acc -= l.get(i, j) * x[i];
    x[j] = acc;
  }
  return x;
}

SplitCholesky::SplitCholesky(std::size_t dim, int bw, std::size_t split,
                             SymBanded store)
    : dim_(dim), bw_(bw), split_(split), store_(std::move(store)) {}

double SplitCholesky::entry(std::size_t i, std::size_t j) const {
  if (i >= dim_ || j >= dim_) return 0.0;
  if (i < split_) {
    // Upper-triangular part, stored transposed in the lower band.
    if (j < i || j >= split_ || j - i > static_cast<std::size_t>(bw_))
      return 0.0;
    return store_.get(j, i);
  }
  if (j > i || i - j > static_cast<std::size_t>(bw_)) return 0.0;
  return store_.get(i, j);
}

std::vector<double> SplitCholesky::apply(std::span<const double> x) const {
  if (x.size() != dim_) throw DimensionError("split-cholesky apply mismatch");
  std::vector<double> y(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    double acc = 0.0;
    if (i < split_) {
      const std::size_t jend = std::min(split_, i + bw_ + 1);
      for (std::size_t j = i; j < jend; ++j) acc += entry(i, j) * x[j];
    } else {
      const std::size_t jlo = i > static_cast<std::size_t>(bw_) ? i - bw_ : 0;
      for (std::size_t j = jlo; j <= i; ++j) acc += entry(i, j) * x[j];
    }
    y[i] = acc;
  }
  return y;
}

std::vector<double> SplitCholesky::apply_transpose(
    std::span<const double> x) const {
  if (x.size() != dim_)
    throw DimensionError("split-cholesky apply_transpose mismatch");
  std::vector<double> y(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    if (i < split_) {
      const std::size_t jend = std::min(split_, i + bw_ + 1);
      for (std::size_t j = i; j < jend; ++j) y[j] += entry(i, j) * xi;
    } else {
      const std::size_t jlo = i > static_cast<std::size_t>(bw_) ? i - bw_ : 0;
      for (std::size_t j = jlo; j <= i; ++j) y[j] += entry(i, j) * xi;
    }
  }
  return y;
}

std::vector<double> SplitCholesky::dense() const {
  std::vector<double> d(dim_ * dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) d[i * dim_ + j] = entry(i, j);
  return d;
}

SplitCholesky split_cholesky(const SymBanded& b) {
  const std::size_t n = b.dim();
  const int bw = std::min<std::size_t>(b.bandwidth(), n ? n - 1 : 0);
  SymBanded w = b.with_bandwidth(bw);
  const std::size_t m = (n + static_cast<std::size_t>(bw)) / 2;

  // Factorize the trailing block as L^T L, proceeding upward.
  for (std::size_t j = n; j-- > m;) {
    double ajj = w.get(j, j);
    if (ajj <= 0.0)
      throw NotPositiveDefiniteError("split-Cholesky pivot <= 0");
    ajj = std::sqrt(ajj);
    w.at_lower(j, j) = ajj;
    const std::size_t km = std::min<std::size_t>(j, bw);
    for (std::size_t c = j - km; c < j; ++c) w.at_lower(j, c) /= ajj;
    for (std::size_t c = j - km; c < j; ++c)
      for (std::size_t r = c; r < j; ++r)
        w.at_lower(r, c) -= w.get(j, r) * w.get(j, c);
  }
  // Factorize the updated leading block as U^T U (stored transposed).
  for (std::size_t j = 0; j < m; ++j) {
    double ajj = w.get(j, j);
    if (ajj <= 0.0)
      throw NotPositiveDefiniteError("split-Cholesky pivot <= 0");
    ajj = std::sqrt(ajj);
    w.at_lower(j, j) = ajj;
    const std::size_t km = std::min<std::size_t>(bw, m - 1 - j);
    for (std::size_t r = j + 1; r <= j + km; ++r) w.at_lower(r, j) /= ajj;
    for (std::size_t c = j + 1; c <= j + km; ++c)
      for (std::size_t r = c; r <= j + km; ++r)
        w.at_lower(r, c) -= w.get(r, j) * w.get(c, j);
  }
  return SplitCholesky(n, bw, m, std::move(w));
}

std::vector<GershgorinDisk> gershgorin_disks(const SymBanded& s) {
  const std::size_t n = s.dim();
  const int bw = s.bandwidth();
  std::vector<GershgorinDisk> disks(n);
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    const std::size_t jlo = i > static_cast<std::size_t>(bw) ? i - bw : 0;
    const std::size_t jhi = std::min(n, i + bw + 1);
    for (std::size_t j = jlo; j < jhi; ++j)
      if (j != i) radius += std::abs(s.get(i, j));
    disks[i] = {s.get(i, i), radius};
  }
  return disks;
}

} // namespace symband
