#include "symband/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symband/errors.hpp"

namespace symband {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool jacobi_family(const BasisId& b) {
  return b.kind == BasisKind::NormalizedLegendre ||
         b.kind == BasisKind::NormalizedJacobi ||
         b.kind == BasisKind::WeightedNormalizedJacobi;
}

struct JacobiParams {
  double alpha, beta, wp, wq;
};

JacobiParams jacobi_params(const BasisId& b) {
  switch (b.kind) {
  case BasisKind::NormalizedLegendre:
    return {0.0, 0.0, 0.0, 0.0};
  case BasisKind::NormalizedJacobi:
    return {b.alpha, b.beta, 0.0, 0.0};
  case BasisKind::WeightedNormalizedJacobi:
    return {b.alpha, b.beta, b.wp, b.wq};
  default:
    throw UnsupportedOperatorError("not a Jacobi-family basis");
  }
}

bool same_map(const BasisId& a, const BasisId& b) {
  return a.map_scale == b.map_scale && a.map_shift == b.map_shift;
}

/// Squared norm of the standard P_0^{(alpha,beta)}.
double jacobi_h0(double alpha, double beta) {
  return std::pow(2.0, alpha + beta + 1.0) * std::tgamma(alpha + 1.0) *
         std::tgamma(beta + 1.0) / std::tgamma(alpha + beta + 2.0);
}

/// Orthonormal Jacobi recurrence in the reference variable.
double jacobi_a(double al, double be, std::size_t n) {
  if (n == 0) return (be - al) / (al + be + 2.0);
  const double s = 2.0 * n + al + be;
  return (be * be - al * al) / (s * (s + 2.0));
}

double jacobi_c(double al, double be, std::size_t n) {
  const double s = 2.0 * n + al + be;
  return 2.0 / (s + 2.0) *
         std::sqrt((n + 1.0) * (n + al + 1.0) * (n + be + 1.0) *
                   (n + al + be + 1.0) / ((s + 1.0) * (s + 3.0)));
}

/// Single-parameter normalized conversion steps (verified pointwise in the
/// test suite): expresses P~^{(al,be)}_n in P~^{(al+1,be)} / P~^{(al,be+1)}.
void conv_step_alpha(double al, double be, std::size_t n, BandedMatrix& c) {
  for (std::size_t m = 0; m < n; ++m) {
    const double s = 2.0 * m + al + be;
    c.at(m, m) = std::sqrt(2.0 * (m + al + 1.0) * (m + al + be + 1.0) /
                           ((s + 1.0) * (s + 2.0)));
    if (m > 0)
      c.at(m - 1, m) =
          -std::sqrt(2.0 * m * (m + be) / (s * (s + 1.0)));
  }
}

void conv_step_beta(double al, double be, std::size_t n, BandedMatrix& c) {
  for (std::size_t m = 0; m < n; ++m) {
    const double s = 2.0 * m + al + be;
    c.at(m, m) = std::sqrt(2.0 * (m + be + 1.0) * (m + al + be + 1.0) /
                           ((s + 1.0) * (s + 2.0)));
    if (m > 0)
      c.at(m - 1, m) = std::sqrt(2.0 * m * (m + al) / (s * (s + 1.0)));
  }
}

std::vector<double> jacobi_values(double al, double be, double t,
                                  std::size_t len) {
  std::vector<double> v(len, 0.0);
  if (len == 0) return v;
  v[0] = 1.0 / std::sqrt(jacobi_h0(al, be));
  if (len == 1) return v;
  v[1] = (t - jacobi_a(al, be, 0)) * v[0] / jacobi_c(al, be, 0);
  for (std::size_t m = 1; m + 1 < len; ++m)
    v[m + 1] = ((t - jacobi_a(al, be, m)) * v[m] -
                jacobi_c(al, be, m - 1) * v[m - 1]) /
               jacobi_c(al, be, m);
  return v;
}

std::vector<double> laguerre_values(int level, double t, std::size_t len,
                                    bool weighted) {
  std::vector<double> raw(len, 0.0);
  if (len == 0) return raw;
  raw[0] = 1.0;
  if (len > 1) raw[1] = 1.0 + level - t;
  for (std::size_t m = 1; m + 1 < len; ++m)
    raw[m + 1] = ((2.0 * m + level + 1.0 - t) * raw[m] -
                  (m + static_cast<double>(level)) * raw[m - 1]) /
                 (m + 1.0);
  // Normalize: h_n = Gamma(n+level+1)/n!, iterated to avoid overflow.
  double h = std::tgamma(level + 1.0);
  const double w = weighted ? std::exp(-0.5 * t) : 1.0;
  for (std::size_t m = 0; m < len; ++m) {
    raw[m] *= w / std::sqrt(h);
    h *= (m + level + 1.0) / (m + 1.0);
  }
  return raw;
}

} // namespace

BasisId BasisId::legendre() {
  BasisId b;
  b.kind = BasisKind::NormalizedLegendre;
  return b;
}

BasisId BasisId::jacobi(double a, double bb) {
  if (a <= -1.0 || bb <= -1.0)
    throw UnsupportedOperatorError("Jacobi parameters must exceed -1");
  if (a == 0.0 && bb == 0.0) return legendre();
  BasisId b;
  b.kind = BasisKind::NormalizedJacobi;
  b.alpha = a;
  b.beta = bb;
  return b;
}

BasisId BasisId::weighted_jacobi(double p, double q, double a, double bb) {
  if (p == 0.0 && q == 0.0) return jacobi(a, bb);
  BasisId b;
  b.kind = BasisKind::WeightedNormalizedJacobi;
  b.wp = p;
  b.wq = q;
  b.alpha = a;
  b.beta = bb;
  return b;
}

BasisId BasisId::weighted_laguerre(int level) {
  BasisId b;
  b.kind = BasisKind::WeightedLaguerre;
  b.level = level;
  return b;
}

BasisId BasisId::fourier_real() {
  BasisId b;
  b.kind = BasisKind::FourierReal;
  return b;
}

BasisId BasisId::with_map(double scale, double shift) const {
  if (scale == 0.0) throw UnsupportedOperatorError("affine map must be invertible");
  BasisId b = *this;
  b.map_scale = scale;
  b.map_shift = shift;
  return b;
}

bool BasisId::operator==(const BasisId& o) const {
  return kind == o.kind && alpha == o.alpha && beta == o.beta && wp == o.wp &&
         wq == o.wq && level == o.level && map_scale == o.map_scale &&
         map_shift == o.map_shift;
}

void CoeffVec::trim() {
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
}

double CoeffVec::eval(double x) const {
  const std::vector<double> v = basis_values(basis, x, coeffs.size());
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * v[i];
  return s;
}

Recurrence recurrence_coeffs(const BasisId& basis, std::size_t n) {
  Recurrence r;
  r.a.resize(n);
  r.c.resize(n);
  if (jacobi_family(basis)) {
    const JacobiParams jp = jacobi_params(basis);
    for (std::size_t m = 0; m < n; ++m) {
      r.a[m] = jacobi_a(jp.alpha, jp.beta, m);
      r.c[m] = jacobi_c(jp.alpha, jp.beta, m);
    }
  } else if (basis.kind == BasisKind::WeightedLaguerre) {
    for (std::size_t m = 0; m < n; ++m) {
      r.a[m] = 2.0 * m + basis.level + 1.0;
      r.c[m] = -std::sqrt((m + 1.0) * (m + basis.level + 1.0));
    }
  } else {
    throw UnsupportedOperatorError("no recurrence for a Fourier basis");
  }
  return r;
}

SymBanded jacobi_operator(const BasisId& basis, std::size_t n) {
  if (!basis.polynomial())
    throw UnsupportedOperatorError("Jacobi operator of a Fourier basis");
  const Recurrence r = recurrence_coeffs(basis, n);
  SymBanded x(n, n > 1 ? 1 : 0);
  const double s = basis.map_scale, c0 = basis.map_shift;
  // physical x = (t - shift)/scale
  for (std::size_t m = 0; m < n; ++m) {
    x.at_lower(m, m) = (r.a[m] - c0) / s;
    if (m + 1 < n) x.at_lower(m + 1, m) = r.c[m] / s;
  }
  return x;
}

BandedMatrix diff_operator(const BasisId& from, const BasisId& to,
                           std::size_t rows, std::size_t cols) {
  const double s = from.map_scale;

  if (from.kind == BasisKind::FourierReal && to.kind == BasisKind::FourierReal) {
    BandedMatrix d(rows, cols, 1, 1);
    for (std::size_t k = 1; 2 * k - 1 < cols; ++k) {
      if (2 * k < rows) d.at(2 * k, 2 * k - 1) = k * s; // sin -> cos
      if (2 * k < cols && 2 * k - 1 < rows)
        d.at(2 * k - 1, 2 * k) = -static_cast<double>(k) * s; // cos -> sin
    }
    return d;
  }

  if (from.kind == BasisKind::WeightedLaguerre &&
      to.kind == BasisKind::WeightedLaguerre && same_map(from, to) &&
      to.level == from.level + 1) {
    BandedMatrix d(rows, cols, 0, 1);
    const double a = from.level;
    for (std::size_t n = 0; n < cols; ++n) {
      if (n < rows) d.at(n, n) = -0.5 * std::sqrt(n + a + 1.0) * s;
      if (n >= 1 && n - 1 < rows)
        d.at(n - 1, n) = -0.5 * std::sqrt(static_cast<double>(n)) * s;
    }
    return d;
  }

  if (jacobi_family(from) && jacobi_family(to) && same_map(from, to)) {
    const JacobiParams f = jacobi_params(from), t = jacobi_params(to);
    // Ascending ladder on the free polynomials.
    if (f.wp == 0.0 && f.wq == 0.0 && t.wp == 0.0 && t.wq == 0.0 &&
        t.alpha == f.alpha + 1.0 && t.beta == f.beta + 1.0) {
      BandedMatrix d(rows, cols, -1, 1);
      for (std::size_t n = 1; n < cols; ++n)
        if (n - 1 < rows)
          d.at(n - 1, n) = std::sqrt(n * (n + f.alpha + f.beta + 1.0)) * s;
      return d;
    }
    // Descending ladder on fully weighted functions (wp==alpha, wq==beta).
    if (f.wp == f.alpha && f.wq == f.beta && f.alpha >= 1.0 && f.beta >= 1.0 &&
        t.alpha == f.alpha - 1.0 && t.beta == f.beta - 1.0 &&
        t.wp == f.wp - 1.0 && t.wq == f.wq - 1.0) {
      BandedMatrix d(rows, cols, 1, -1);
      for (std::size_t n = 0; n < cols; ++n)
        if (n + 1 < rows)
          d.at(n + 1, n) =
              -std::sqrt((n + 1.0) * (n + f.alpha + f.beta)) * s;
      return d;
    }
  }
  throw UnsupportedOperatorError("unsupported differentiation pair");
}

BandedMatrix conversion_operator(const BasisId& from, const BasisId& to,
                                 std::size_t n) {
  if (from == to) return BandedMatrix::identity(n);

  if (from.kind == BasisKind::WeightedLaguerre &&
      to.kind == BasisKind::WeightedLaguerre && same_map(from, to) &&
      to.level > from.level) {
    BandedMatrix total = BandedMatrix::identity(n);
    for (int lv = from.level; lv < to.level; ++lv) {
      BandedMatrix step(n, n, 0, 1);
      for (std::size_t m = 0; m < n; ++m) {
        step.at(m, m) = std::sqrt(m + lv + 1.0);
        if (m > 0) step.at(m - 1, m) = -std::sqrt(static_cast<double>(m));
      }
      total = BandedMatrix::multiply(step, total);
    }
    return total;
  }

  if (jacobi_family(from) && jacobi_family(to) && same_map(from, to)) {
    const JacobiParams f = jacobi_params(from), t = jacobi_params(to);
    if (f.wp != t.wp || f.wq != t.wq)
      throw UnsupportedOperatorError("conversion cannot change the weight");
    const double da = t.alpha - f.alpha, db = t.beta - f.beta;
    if (da == db && da > 0.0 && da == std::floor(da)) {
      BandedMatrix total = BandedMatrix::identity(n);
      double al = f.alpha, be = f.beta;
      for (int k = 0; k < static_cast<int>(da); ++k) {
        BandedMatrix sa(n, n, 0, 1);
        conv_step_alpha(al, be, n, sa);
        total = BandedMatrix::multiply(sa, total);
        al += 1.0;
        BandedMatrix sb(n, n, 0, 1);
        conv_step_beta(al, be, n, sb);
        total = BandedMatrix::multiply(sb, total);
        be += 1.0;
      }
      return total;
    }
  }
  throw UnsupportedOperatorError("unsupported conversion pair");
}

BasisId trial_base_basis(const BasisId& weighted) {
  if (weighted.kind == BasisKind::WeightedNormalizedJacobi &&
      weighted.wp == 1.0 && weighted.wq == 1.0 && weighted.alpha == 1.0 &&
      weighted.beta == 1.0)
    return BasisId::legendre().with_map(weighted.map_scale,
                                        weighted.map_shift);
  if (weighted.kind == BasisKind::WeightedLaguerre) return weighted;
  throw UnsupportedOperatorError("no base conversion for this trial basis");
}

BandedMatrix weighted_trial_conversion(const BasisId& weighted,
                                       std::size_t rows, std::size_t cols) {
  if (weighted.kind == BasisKind::WeightedLaguerre) {
    BandedMatrix a(rows, cols, 0, 0);
    for (std::size_t j = 0; j < std::min(rows, cols); ++j) a.at(j, j) = 1.0;
    return a;
  }
  if (!(weighted.kind == BasisKind::WeightedNormalizedJacobi &&
        weighted.wp == 1.0 && weighted.wq == 1.0 && weighted.alpha == 1.0 &&
        weighted.beta == 1.0))
    throw UnsupportedOperatorError("unsupported weighted trial basis");
  // (1-x^2) P~_n^{(1,1)} in normalized Legendre.
  BandedMatrix a(rows, cols, 2, 0);
  for (std::size_t j = 0; j < cols; ++j) {
    const double nn = static_cast<double>(j);
    if (j < rows)
      a.at(j, j) = std::sqrt((nn + 1.0) * (nn + 2.0) /
                             ((2.0 * nn + 1.0) * (2.0 * nn + 3.0)));
    if (j + 2 < rows)
      a.at(j + 2, j) = -std::sqrt((nn + 1.0) * (nn + 2.0) /
                                  ((2.0 * nn + 3.0) * (2.0 * nn + 5.0)));
  }
  return a;
}

namespace {

/// Accumulate val * trig(r*theta) expressed on the orthonormal real Fourier
/// basis into column j of m.
void add_fourier(SymBanded& m, std::size_t j, long r, double val, bool is_sin,
                 double sqrt_pi, double sqrt_2pi) {
  if (val == 0.0) return;
  if (is_sin) {
    if (r == 0) return;
    if (r < 0) {
      r = -r;
      val = -val;
    }
    const std::size_t idx = 2 * static_cast<std::size_t>(r) - 1;
    if (idx < m.dim()) m.at_lower(idx, j) += val * sqrt_pi;
  } else {
    if (r < 0) r = -r;
    if (r == 0) {
      m.at_lower(0, j) += val * sqrt_2pi;
    } else {
      const std::size_t idx = 2 * static_cast<std::size_t>(r);
      if (idx < m.dim()) m.at_lower(idx, j) += val * sqrt_pi;
    }
  }
}

SymBanded fourier_multiplication(const CoeffVec& f, std::size_t n) {
  const double sqrt_pi = std::sqrt(std::acos(-1.0));
  const double sqrt_2pi = std::sqrt(2.0 * std::acos(-1.0));
  long kmax = 0;
  for (std::size_t i = 1; i < f.coeffs.size(); ++i)
    if (f.coeffs[i] != 0.0) kmax = std::max<long>(kmax, (i + 1) / 2);
  const int bw = static_cast<int>(std::min<std::size_t>(
      n > 0 ? n - 1 : 0, 2 * static_cast<std::size_t>(kmax) + 1));
  SymBanded m(n, bw);

  // f = A0 + sum_m (Ac_m cos m theta + As_m sin m theta)
  const double a0 = f.coeffs.empty() ? 0.0 : f.coeffs[0] / sqrt_2pi;
  for (std::size_t j = 0; j < n; ++j) {
    // basis_j as (harmonic k, sin/cos) with amplitude 1/sqrt(pi) (or e0).
    const bool j_is_const = (j == 0);
    const long k = j_is_const ? 0 : static_cast<long>((j + 1) / 2);
    const bool j_sin = !j_is_const && (j % 2 == 1);
    const double jamp = j_is_const ? 1.0 / sqrt_2pi : 1.0 / sqrt_pi;

    // Constant part of f: diagonal. Store once (lower triangle only).
    m.at_lower(j, j) += a0;

    for (std::size_t i = 1; i < f.coeffs.size(); ++i) {
      const double coef = f.coeffs[i];
      if (coef == 0.0) continue;
      const long mh = static_cast<long>((i + 1) / 2);
      const bool f_sin = (i % 2 == 1);
      const double amp = coef / sqrt_pi * jamp;
      // products: write f_harm * basis_j as trig functions, project, and
      // keep only the lower triangle (rows >= j) to avoid double writes.
      auto add = [&](long r, double v, bool vsin) {
        // amplitude v of trig(r theta); project on basis index >= j only
        if (vsin) {
          if (r == 0) return;
          if (r < 0) {
            r = -r;
            v = -v;
          }
          const std::size_t idx = 2 * static_cast<std::size_t>(r) - 1;
          if (idx >= j && idx < n)
            m.at_lower(idx, j) += v * sqrt_pi;
        } else {
          if (r < 0) r = -r;
          if (r == 0) {
            if (j == 0) m.at_lower(0, 0) += v * sqrt_2pi;
            return;
          }
          const std::size_t idx = 2 * static_cast<std::size_t>(r);
          if (idx >= j && idx < n) m.at_lower(idx, j) += v * sqrt_pi;
        }
      };
      if (!f_sin && !j_sin) {
        // cos m * cos k = (cos(m+k) + cos(m-k))/2
        add(mh + k, 0.5 * amp, false);
        add(mh - k, 0.5 * amp, false);
      } else if (!f_sin && j_sin) {
        // cos m * sin k = (sin(k+m) + sin(k-m))/2
        add(k + mh, 0.5 * amp, true);
        add(k - mh, 0.5 * amp, true);
      } else if (f_sin && !j_sin) {
        // sin m * cos k = (sin(m+k) + sin(m-k))/2
        add(mh + k, 0.5 * amp, true);
        add(mh - k, 0.5 * amp, true);
      } else {
        // sin m * sin k = (cos(m-k) - cos(m+k))/2
        add(mh - k, 0.5 * amp, false);
        add(mh + k, -0.5 * amp, false);
      }
    }
  }
  (void)add_fourier;
  return m;
}

} // namespace

SymBanded multiplication_operator(const CoeffVec& f, const BasisId& acting,
                                  std::size_t n) {
  if (acting.kind == BasisKind::FourierReal) {
    if (f.basis.kind != BasisKind::FourierReal)
      throw UnsupportedOperatorError("Fourier multiplication needs Fourier f");
    return fourier_multiplication(f, n);
  }
  if (!acting.polynomial() || !f.basis.polynomial() ||
      f.basis.kind == BasisKind::WeightedNormalizedJacobi ||
      f.basis.kind == BasisKind::WeightedLaguerre)
    throw UnsupportedOperatorError(
        "multiplication needs a polynomial coefficient expansion");

  CoeffVec ff = f;
  ff.trim();
  if (ff.coeffs.empty()) return SymBanded(n, 0);
  const std::size_t m = ff.coeffs.size() - 1;

  const std::size_t work = n + m + 1;
  const SymBanded x = jacobi_operator(acting, work);
  const Recurrence rec = recurrence_coeffs(f.basis, m + 1);
  const double fs = f.basis.map_scale, fc = f.basis.map_shift;

  // Clenshaw with matrix argument: p_{k+1} = ((t - a_k) p_k - c_{k-1}
  // p_{k-1})/c_k, t = fs*x + fc.
  auto apply_arg = [&](const BandedMatrix& bmat, double ak) {
    // (fs*X + (fc - ak) I) * bmat
    BandedMatrix xb(work, work, bmat.lower() + 1, bmat.upper() + 1);
    for (std::size_t j = 0; j < work; ++j)
      for (std::size_t i = bmat.col_begin(j); i < bmat.col_end(j); ++i) {
        const double v = bmat.get(i, j);
        if (v == 0.0) continue;
        // row i of X: entries (i, i-1), (i,i), (i, i+1)
        if (i > 0) xb.at(i - 1, j) += fs * x.get(i - 1, i) * v;
        xb.at(i, j) += (fs * x.get(i, i) + fc - ak) * v;
        if (i + 1 < work) xb.at(i + 1, j) += fs * x.get(i + 1, i) * v;
      }
    return xb;
  };

  BandedMatrix b1(work, work, 0, 0), b2(work, work, 0, 0);
  bool have1 = false, have2 = false;
  for (std::size_t k = ff.coeffs.size(); k-- > 0;) {
    BandedMatrix bk(work, work, 0, 0);
    for (std::size_t i = 0; i < work; ++i) bk.at(i, i) = ff.coeffs[k];
    if (have1) {
      BandedMatrix t = apply_arg(b1, rec.a[k]);
      t.scale(1.0 / rec.c[k]);
      bk = BandedMatrix::add(bk, t);
    }
    if (have2) {
      BandedMatrix t = b2;
      t.scale(-rec.c[k] / rec.c[k + 1]);
      bk = BandedMatrix::add(bk, t);
    }
    b2 = std::move(b1);
    have2 = have1;
    b1 = std::move(bk);
    have1 = true;
  }
  // S = b_0 * p_0, with p_0 the constant value of f's basis element 0.
  const JacobiParams jp = jacobi_params(f.basis);
  const double p0 =
      std::sqrt(std::abs(fs)) / std::sqrt(jacobi_h0(jp.alpha, jp.beta));
  b1.scale(p0);

  SymBanded out(n, static_cast<int>(std::min<std::size_t>(m, n > 0 ? n - 1 : 0)));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < std::min(n, j + m + 1); ++i)
      out.at_lower(i, j) = 0.5 * (b1.get(i, j) + b1.get(j, i));
  return out;
}

std::vector<double> basis_values(const BasisId& basis, double x,
                                 std::size_t length) {
  std::vector<double> v;
  const double s = basis.map_scale;
  const double t = s * x + basis.map_shift;
  switch (basis.kind) {
  case BasisKind::FourierReal: {
    const double sqrt_pi = std::sqrt(std::acos(-1.0));
    v.assign(length, 0.0);
    if (length > 0) v[0] = 1.0 / std::sqrt(2.0 * std::acos(-1.0));
    for (std::size_t k = 1; 2 * k - 1 < length; ++k) {
      v[2 * k - 1] = std::sin(k * x) / sqrt_pi;
      if (2 * k < length) v[2 * k] = std::cos(k * x) / sqrt_pi;
    }
    return v;
  }
  case BasisKind::WeightedLaguerre: {
    v = laguerre_values(basis.level, t, length, true);
    const double f = std::sqrt(std::abs(s));
    for (double& e : v) e *= f;
    return v;
  }
  default: {
    const JacobiParams jp = jacobi_params(basis);
    v = jacobi_values(jp.alpha, jp.beta, t, length);
    double f = std::sqrt(std::abs(s));
    if (jp.wp != 0.0) f *= std::pow(1.0 - t, jp.wp);
    if (jp.wq != 0.0) f *= std::pow(1.0 + t, jp.wq);
    for (double& e : v) e *= f;
    return v;
  }
  }
}

std::vector<double> boundary_row(const BasisId& basis, FunctionalKind kind,
                                 int order, double point, std::size_t length) {
  if (kind == FunctionalKind::Eval) order = 0;
  if (basis.kind == BasisKind::FourierReal)
    throw UnsupportedOperatorError("boundary rows on a periodic basis");

  if (std::isinf(point)) {
    if (basis.kind == BasisKind::WeightedLaguerre && point > 0)
      return std::vector<double>(length, 0.0); // the weight wins any power
    throw UnsupportedOperatorError("evaluation at infinity without decay");
  }

  if (basis.kind == BasisKind::WeightedLaguerre) {
    if (order == 0) return basis_values(basis, point, length);
    BandedMatrix d = BandedMatrix::identity(length);
    BasisId cur = basis;
    for (int k = 0; k < order; ++k) {
      const BasisId next = BasisId::weighted_laguerre(cur.level + 1)
                               .with_map(cur.map_scale, cur.map_shift);
      d = BandedMatrix::multiply(diff_operator(cur, next, length, length), d);
      cur = next;
    }
    const std::vector<double> vals = basis_values(cur, point, length);
    std::vector<double> row(length, 0.0);
    for (std::size_t j = 0; j < length; ++j)
      for (std::size_t i = d.col_begin(j); i < d.col_end(j); ++i)
        row[j] += vals[i] * d.get(i, j);
    return row;
  }

  const JacobiParams jp = jacobi_params(basis);
  const double s = basis.map_scale;
  const double t = s * point + basis.map_shift;

  if (jp.wp == 0.0 && jp.wq == 0.0) {
    if (order == 0) return basis_values(basis, point, length);
    // d^k: ladder factors onto P~^{(alpha+k, beta+k)}.
    const std::vector<double> vals =
        jacobi_values(jp.alpha + order, jp.beta + order, t, length);
    std::vector<double> row(length, 0.0);
    const double mapf = std::sqrt(std::abs(s)) * std::pow(s, order);
    for (std::size_t n = static_cast<std::size_t>(order); n < length; ++n) {
      double f = 1.0;
      for (int j = 0; j < order; ++j)
        f *= std::sqrt((n - j) * (n + jp.alpha + jp.beta + 1.0 + j));
      row[n] = mapf * f * vals[n - order];
    }
    return row;
  }

  // Weighted Jacobi trial bases: values, and first derivatives through the
  // descending ladder when the weights match the parameters.
  if (order == 0) return basis_values(basis, point, length);
  if (order == 1 && jp.wp == jp.alpha && jp.wq == jp.beta && jp.alpha >= 1.0 &&
      jp.beta >= 1.0) {
    const std::vector<double> vals =
        jacobi_values(jp.alpha - 1.0, jp.beta - 1.0, t, length + 1);
    const double w = std::pow(1.0 - t, jp.wp - 1.0) *
                     std::pow(1.0 + t, jp.wq - 1.0);
    std::vector<double> row(length, 0.0);
    const double mapf = std::sqrt(std::abs(s)) * s;
    for (std::size_t n = 0; n < length; ++n)
      row[n] = -mapf * w *
               std::sqrt((n + 1.0) * (n + jp.alpha + jp.beta)) * vals[n + 1];
    return row;
  }
  throw UnsupportedOperatorError("derivative order unsupported for weighted basis");
}

CoeffVec polynomial_coeffs(const BasisId& basis,
                           const std::vector<double>& monomial,
                           std::size_t n) {
  if (!basis.polynomial() || basis.kind == BasisKind::WeightedNormalizedJacobi)
    throw UnsupportedOperatorError("polynomial coefficients need a free polynomial basis");
  std::vector<double> p = monomial;
  while (!p.empty() && p.back() == 0.0) p.pop_back();
  CoeffVec out{basis, {}};
  if (p.empty()) return out;
  const std::size_t deg = p.size() - 1;
  const std::size_t work = n + deg + 1;
  const SymBanded x = jacobi_operator(basis, work);

  // function "1" in the basis
  std::vector<double> one(work, 0.0);
  double gamma;
  if (basis.kind == BasisKind::WeightedLaguerre) {
    gamma = std::sqrt(std::tgamma(basis.level + 1.0)) /
            std::sqrt(std::abs(basis.map_scale));
  } else {
    const JacobiParams jp = jacobi_params(basis);
    gamma = std::sqrt(jacobi_h0(jp.alpha, jp.beta)) /
            std::sqrt(std::abs(basis.map_scale));
  }
  one[0] = gamma;

  std::vector<double> v(work, 0.0);
  for (std::size_t i = 0; i < work; ++i) v[i] = p[deg] * one[i];
  for (std::size_t k = deg; k-- > 0;) {
    v = x.apply(v);
    for (std::size_t i = 0; i < work; ++i) v[i] += p[k] * one[i];
  }
  v.resize(n);
  out.coeffs = std::move(v);
  out.trim();
  return out;
}

double legendre_std(std::size_t n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return p0;
  for (std::size_t m = 1; m < n; ++m) {
    const double p2 = ((2.0 * m + 1.0) * x * p1 - m * p0) / (m + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double legendre_std_deriv(std::size_t n, double x) {
  // P'_{n+1} = P'_{n-1} + (2n+1) P_n
  if (n == 0) return 0.0;
  double p0 = 1.0, p1 = x;
  double d0 = 0.0, d1 = 1.0;
  for (std::size_t m = 1; m < n; ++m) {
    const double p2 = ((2.0 * m + 1.0) * x * p1 - m * p0) / (m + 1.0);
    const double d2 = d0 + (2.0 * m + 1.0) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  return d1;
}

} // namespace symband
