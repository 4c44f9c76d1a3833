#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "symband/errors.hpp"

namespace symband {

/// General banded matrix with independent lower/upper bandwidths, stored in
/// column-major LAPACK band layout: entry (i,j) lives at
/// data[(lower+upper+1)*j + upper + i - j] whenever -upper <= i-j <= lower.
///
/// The bandwidths may be negative (a band strictly above or below the main
/// diagonal) as long as lower + upper >= 0; this keeps bandwidth bookkeeping
/// exact through products of shifted operators such as differentiation
/// ladders. Reads outside the band return zero; nonzero writes outside the
/// band are hard errors so assembly bugs surface instead of silently
/// truncating.
class BandedMatrix {
public:
  BandedMatrix(std::size_t rows, std::size_t cols, int lower, int upper);

  static BandedMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int lower() const { return lower_; }
  int upper() const { return upper_; }

  bool in_band(std::size_t i, std::size_t j) const {
    const long d = static_cast<long>(i) - static_cast<long>(j);
    return d <= lower_ && -d <= upper_;
  }

  double get(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_ || !in_band(i, j)) return 0.0;
    return data_[idx(i, j)];
  }

  void set(std::size_t i, std::size_t j, double v);

  /// In-band mutable access; throws on out-of-band positions.
  double& at(std::size_t i, std::size_t j);

  /// First/one-past-last stored row of column j, clipped to the matrix.
  std::size_t col_begin(std::size_t j) const;
  std::size_t col_end(std::size_t j) const;
  /// First/one-past-last stored column of row i, clipped to the matrix.
  std::size_t row_begin(std::size_t i) const;
  std::size_t row_end(std::size_t i) const;

  double frobenius_norm() const;
  double inf_norm() const;

  BandedMatrix transpose() const;

  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> apply_transpose(std::span<const double> x) const;

  /// Band-aware product; the result bandwidths are the sums of the operands'.
  static BandedMatrix multiply(const BandedMatrix& a, const BandedMatrix& b);

  static BandedMatrix add(const BandedMatrix& a, const BandedMatrix& b);
  void scale(double s);

  /// Leading section, keeping the band profile.
  BandedMatrix section(std::size_t r, std::size_t c) const;

  /// Row-major dense copy (tests and small problems only).
  std::vector<double> dense() const;

private:
  std::size_t idx(std::size_t i, std::size_t j) const {
    return static_cast<std::size_t>(width_) * j +
           static_cast<std::size_t>(upper_ + static_cast<long>(i) -
                                    static_cast<long>(j));
  }

  std::size_t rows_ = 0, cols_ = 0;
  int lower_ = 0, upper_ = 0, width_ = 1;
  std::vector<double> data_;
};

/// Symmetric banded matrix, one stored (lower) band. Logical symmetry is
/// exact by construction: get(i,j) and get(j,i) read the same slot.
class SymBanded {
public:
  SymBanded() = default;
  SymBanded(std::size_t dim, int half_bandwidth);

  static SymBanded identity(std::size_t n);

  std::size_t dim() const { return dim_; }
  int bandwidth() const { return bw_; }

  double get(std::size_t i, std::size_t j) const {
    if (i < j) std::swap(i, j);
    if (i >= dim_ || i - j > static_cast<std::size_t>(bw_)) return 0.0;
    return data_[idx(i, j)];
  }

  void set(std::size_t i, std::size_t j, double v);

  /// Mutable access to the stored lower-band slot for i >= j.
  double& at_lower(std::size_t i, std::size_t j);

  double inf_norm() const;
  double frobenius_norm() const;
  double max_abs() const;

  std::vector<double> apply(std::span<const double> x) const;

  SymBanded section(std::size_t n) const;

  /// Widen (or narrow, when the outer bands are zero) the stored band.
  SymBanded with_bandwidth(int new_bw) const;

  BandedMatrix to_banded() const;

  std::vector<double> dense() const;

private:
  std::size_t idx(std::size_t i, std::size_t j) const {
    return static_cast<std::size_t>(bw_ + 1) * j + (i - j);
  }

  std::size_t dim_ = 0;
  int bw_ = 0;
  std::vector<double> data_;
};

/// Symmetric-definite pencil (A, B); B is positive-definite by contract.
struct Pencil {
  SymBanded a;
  SymBanded b;

  Pencil(SymBanded a_in, SymBanded b_in);

  std::size_t dim() const { return a.dim(); }
  int bandwidth() const { return a.bandwidth() > b.bandwidth() ? a.bandwidth() : b.bandwidth(); }
};

/// One plane rotation acting on adjacent rows (p, p+1):
///   row_p  <-  c*row_p + s*row_{p+1}
///   row_{p+1} <- -s*row_p + c*row_{p+1}
struct GivensRotation {
  std::size_t p;
  double c, s;
};

/// Ordered rotation sequence G_k ... G_1 representing Q^T, so that
/// Q^T M = R in a banded QR factorization.
class GivensSequence {
public:
  void push(std::size_t p, double c, double s) { rots_.push_back({p, c, s}); }
  std::size_t size() const { return rots_.size(); }
  bool empty() const { return rots_.empty(); }
  const std::vector<GivensRotation>& rotations() const { return rots_; }

  /// x <- Q x (reverse order, transposed rotations).
  void apply(std::span<double> x) const;
  /// x <- Q^T x (forward order).
  void apply_transpose(std::span<double> x) const;

private:
  std::vector<GivensRotation> rots_;
};

struct BandQR {
  GivensSequence q;
  BandedMatrix r;
};

/// QR factorization of a banded matrix by Givens rotations on adjacent rows.
/// R has upper bandwidth at most lower+upper; cost is linear in cols for
/// fixed bandwidths.
BandQR band_qr(const BandedMatrix& m);

/// Banded upper-triangular partial inverse P of C: P agrees with C^{-1} on
/// the band 0 <= j-i <= extra_upper, so (P*C)(i,j) = delta_ij there.
BandedMatrix tri_upper_partial_inverse(const BandedMatrix& c, int extra_upper);

/// Unpivoted banded LDL^T of s - shift*t with inertia counts. Pivots with
/// |d_i| <= eps*||s||_inf are counted as zero; an exact zero pivot throws
/// BreakdownError (the caller perturbs the shift and retries).
struct LdltResult {
  std::vector<double> d;
  BandedMatrix l; // unit lower triangular, banded
  int n_neg = 0, n_zero = 0, n_pos = 0;

  std::vector<double> solve(std::span<const double> rhs) const;
};

LdltResult ldlt_banded(const SymBanded& s, double shift = 0.0,
                       const SymBanded* t = nullptr);

/// Split-Cholesky factorization B = S^T S in the LAPACK DPBSTF sense:
/// S is upper triangular in its leading split x split block and lower
/// triangular below, and retains the bandwidth of B.
class SplitCholesky {
public:
  SplitCholesky(std::size_t dim, int bw, std::size_t split, SymBanded store);

  std::size_t dim() const { return dim_; }
  int bandwidth() const { return bw_; }
  std::size_t split() const { return split_; }

  /// Entry S(i, j) of the factor.
  double entry(std::size_t i, std::size_t j) const;

  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> apply_transpose(std::span<const double> x) const;

  std::vector<double> dense() const;

private:
  std::size_t dim_;
  int bw_;
  std::size_t split_;
  SymBanded store_; // factor entries in the band slots of B
};

SplitCholesky split_cholesky(const SymBanded& b);

struct GershgorinDisk {
  double center;
  double radius;
};

std::vector<GershgorinDisk> gershgorin_disks(const SymBanded& s);

} // namespace symband
