#include "symband/eigsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "blockops.hpp"

namespace symband {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Congruence by the plane rotation G = [[c, s], [-s, c]] on rows/cols
/// (p, p+1) of a working symmetric band. All fill stays within the working
/// bandwidth by the callers' schedules.
void rotate_sym_plane(SymBanded& w, std::size_t p, double c, double s) {
  const std::size_t n = w.dim();
  const std::size_t bw = static_cast<std::size_t>(w.bandwidth());
  const std::size_t q = p + 1;

  const double wpp = w.get(p, p), wqq = w.get(q, q), wpq = w.get(q, p);
  w.at_lower(p, p) = c * c * wpp + 2.0 * c * s * wpq + s * s * wqq;
  w.at_lower(q, q) = s * s * wpp - 2.0 * c * s * wpq + c * c * wqq;
  w.at_lower(q, p) = c * s * (wqq - wpp) + (c * c - s * s) * wpq;

  const std::size_t tlo = q > bw ? q - bw : 0;
  for (std::size_t t = tlo; t < p; ++t) {
    const double a = w.get(p, t), b = w.get(q, t);
    if (a == 0.0 && b == 0.0) continue;
    w.at_lower(p, t) = c * a + s * b;
    w.at_lower(q, t) = -s * a + c * b;
  }
  const std::size_t thi = std::min(n - 1, p + bw);
  for (std::size_t t = q + 1; t <= thi; ++t) {
    const double a = w.get(t, p), b = w.get(t, q);
    if (a == 0.0 && b == 0.0) continue;
    w.at_lower(t, p) = c * a + s * b;
    w.at_lower(t, q) = -s * a + c * b;
  }
}

void sort_spectral(std::vector<double>& d, DenseMat* z) {
  const std::size_t n = d.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  std::vector<double> ds(n);
  for (std::size_t k = 0; k < n; ++k) ds[k] = d[perm[k]];
  d = std::move(ds);
  if (z && !z->empty()) {
    DenseMat zn(z->rows, z->cols);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < z->rows; ++i) zn(i, k) = (*z)(i, perm[k]);
    *z = std::move(zn);
  }
}

} // namespace

void RotationLog::apply_inverse_to_rows(DenseMat& m) const {
  for (auto it = rots.rbegin(); it != rots.rend(); ++it) {
    const std::size_t p = it->p, q = it->p + 1;
    for (std::size_t j = 0; j < m.cols; ++j) {
      const double a = m(p, j), b = m(q, j);
      m(p, j) = it->c * a - it->s * b;
      m(q, j) = it->s * a + it->c * b;
    }
  }
}

SymBanded reduce_bandwidth(const SymBanded& s, int target, RotationLog* log) {
  const std::size_t n = s.dim();
  if (target < 0) throw DimensionError("reduce_bandwidth target < 0");
  int b0 = s.bandwidth();
  if (n > 0) b0 = std::min<int>(b0, static_cast<int>(n) - 1);
  if (b0 <= target) return s.with_bandwidth(std::max(b0, target));

  SymBanded w = s.with_bandwidth(b0 + 1);
  for (int r = b0; r > target; --r) {
    const std::size_t ur = static_cast<std::size_t>(r);
    for (std::size_t i = n - 1; i >= ur; --i) {
      if (w.get(i, i - ur) != 0.0) {
        std::size_t row = i, col = i - ur;
        for (;;) {
          const double bulge = w.get(row, col);
          if (bulge == 0.0) break;
          const double partner = w.get(row, col + 1);
          const double h = std::hypot(partner, bulge);
          const double c = partner / h, sn = -bulge / h;
          rotate_sym_plane(w, col, c, sn);
          w.at_lower(row, col) = 0.0;
          if (log) log->rots.push_back({col, c, sn});
          if (col < ur) break; // bulge would exit above the top
          row = col + 1;
          col -= ur;
        }
      }
      if (i == ur) break;
    }
  }
  return w.with_bandwidth(target);
}

TridiagResult band_to_tridiag(const SymBanded& s) {
  TridiagResult res;
  const SymBanded t = reduce_bandwidth(s, 1, &res.log);
  const std::size_t n = s.dim();
  res.diag.resize(n);
  res.off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) res.diag[i] = t.get(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) res.off[i] = t.get(i + 1, i);
  return res;
}

DenseMat TridiagResult::accumulate_q(std::size_t n) const {
  DenseMat q = DenseMat::eye(n);
  log.apply_inverse_to_rows(q);
  return q;
}

void tridiag_ql(std::vector<double>& d, std::vector<double>& e, DenseMat* z) {
  const std::size_t n = d.size();
  if (n == 0) return;
  e.resize(n, 0.0); // one spare slot, EISPACK style
  const std::size_t cap = 50 * n;
  std::size_t total = 0;

  for (std::size_t l = 0; l < n; ++l) {
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m == l) break;
      if (++total > cap)
        throw IterationLimitError("tridiagonal QL exceeded 50*dim sweeps");

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (z) {
          for (std::size_t k = 0; k < z->rows; ++k) {
            f = (*z)(k, i + 1);
            (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
            (*z)(k, i) = c * (*z)(k, i) - s * f;
          }
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

SpectralResult tridiag_eig(std::vector<double> diag, std::vector<double> off,
                           bool want_vectors) {
  const std::size_t n = diag.size();
  if (off.size() + 1 != n && !(n == 0 && off.empty()))
    throw DimensionError("tridiag_eig off-diagonal length mismatch");
  SpectralResult res;
  DenseMat z;
  if (want_vectors) z = DenseMat::eye(n);
  tridiag_ql(diag, off, want_vectors ? &z : nullptr);
  sort_spectral(diag, want_vectors ? &z : nullptr);
  res.values = std::move(diag);
  if (want_vectors) res.vectors = std::move(z);
  return res;
}

SpectralResult tridiag_eig(const SymBanded& t, bool want_vectors) {
  if (t.bandwidth() > 1)
    throw DimensionError("tridiag_eig input has bandwidth > 1");
  const std::size_t n = t.dim();
  std::vector<double> d(n), e(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = t.get(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = t.get(i + 1, i);
  return tridiag_eig(std::move(d), std::move(e), want_vectors);
}

SpectralResult sym_band_eig(const SymBanded& s, bool want_vectors) {
  const std::size_t n = s.dim();
  TridiagResult tri = band_to_tridiag(s);
  SpectralResult res;
  DenseMat z;
  if (want_vectors) z = DenseMat::eye(n);
  tridiag_ql(tri.diag, tri.off, want_vectors ? &z : nullptr);
  if (want_vectors) tri.log.apply_inverse_to_rows(z);
  sort_spectral(tri.diag, want_vectors ? &z : nullptr);
  res.values = std::move(tri.diag);
  if (want_vectors) res.vectors = std::move(z);
  return res;
}

namespace {

struct CongruenceStep {
  enum class Kind { Scale, Elim, Rotate };
  Kind kind;
  std::size_t block; // Scale/Elim: block index I; Rotate: pair (block, block+1)
  DenseMat m;        // L (Scale), G (Elim), Qt (Rotate)
};

void symmetrize(DenseMat& m) {
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
}

DenseMat extract_block(const SymBanded& s, std::size_t r0, std::size_t c0,
                       std::size_t nr, std::size_t nc) {
  DenseMat m(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = s.get(r0 + i, c0 + j);
  return m;
}

} // namespace

SpectralResult gen_sym_band_eig(const Pencil& pencil, bool want_vectors) {
  const std::size_t n = pencil.dim();
  SpectralResult res;
  if (n == 0) return res;

  std::size_t b = static_cast<std::size_t>(std::max(pencil.bandwidth(), 1));
  b = std::min(b, n == 1 ? std::size_t{1} : n - 1);
  const std::size_t nblocks = (n + b - 1) / b;
  auto bsize = [&](std::size_t i) { return std::min(b, n - i * b); };

  std::vector<DenseMat> ad(nblocks), as(nblocks), bd(nblocks), bs(nblocks);
  for (std::size_t i = 0; i < nblocks; ++i) {
    ad[i] = extract_block(pencil.a, i * b, i * b, bsize(i), bsize(i));
    bd[i] = extract_block(pencil.b, i * b, i * b, bsize(i), bsize(i));
    if (i + 1 < nblocks) {
      as[i] = extract_block(pencil.a, (i + 1) * b, i * b, bsize(i + 1), bsize(i));
      bs[i] = extract_block(pencil.b, (i + 1) * b, i * b, bsize(i + 1), bsize(i));
    }
  }

  std::vector<CongruenceStep> steps;

  for (std::size_t bi = 0; bi < nblocks; ++bi) {
    DenseMat l = dense_cholesky(bd[bi]);
    solve_lower_inplace(l, ad[bi]);
    solve_right_lower_trans_inplace(l, ad[bi]);
    symmetrize(ad[bi]);
    if (bi > 0) solve_lower_inplace(l, as[bi - 1]);
    if (bi + 1 < nblocks) {
      solve_right_lower_trans_inplace(l, as[bi]);
      solve_right_lower_trans_inplace(l, bs[bi]);
    }
    bd[bi] = DenseMat::eye(bsize(bi));
    if (want_vectors) steps.push_back({CongruenceStep::Kind::Scale, bi, l});

    if (bi + 1 == nblocks) break;

    DenseMat g = bs[bi];
    bs[bi] = DenseMat(bsize(bi + 1), bsize(bi));
    // Bd[I+1] -= G G^T
    {
      DenseMat ggt = dense_mul_nt(g, g);
      for (std::size_t i = 0; i < ggt.rows; ++i)
        for (std::size_t j = 0; j < ggt.cols; ++j) bd[bi + 1](i, j) -= ggt(i, j);
      symmetrize(bd[bi + 1]);
    }
    const DenseMat as_old = as[bi];
    const DenseMat ad_old = ad[bi];
    DenseMat bulge;
    bool have_bulge = false;
    if (bi > 0) {
      bulge = dense_mul(g, as[bi - 1]);
      for (double& v : bulge.a) v = -v;
      have_bulge = true;
    }
    {
      DenseMat gad = dense_mul(g, ad_old);
      for (std::size_t i = 0; i < as[bi].rows; ++i)
        for (std::size_t j = 0; j < as[bi].cols; ++j) as[bi](i, j) -= gad(i, j);
      DenseMat gat = dense_mul_nt(g, as_old);       // G As^T
      DenseMat agt = dense_transpose(gat);          // As G^T
      DenseMat gagt = dense_mul_nt(dense_mul(g, ad_old), g);
      for (std::size_t i = 0; i < ad[bi + 1].rows; ++i)
        for (std::size_t j = 0; j < ad[bi + 1].cols; ++j)
          ad[bi + 1](i, j) += -gat(i, j) - agt(i, j) + gagt(i, j);
      symmetrize(ad[bi + 1]);
    }
    if (want_vectors) steps.push_back({CongruenceStep::Kind::Elim, bi, g});

    // Chase the fill at block (t+2, t) up through the identity region of B.
    std::size_t t = bi; // bulge lives at (t+1, t-1) with t = bi, handled as (t'+2, t')
    while (have_bulge && t >= 1) {
      const std::size_t tt = t - 1; // bulge at (tt+2, tt)
      const std::size_t s0 = bsize(tt), s1 = bsize(tt + 1), s2 = bsize(tt + 2);
      DenseMat m(s0 + s1, s2);
      for (std::size_t i = 0; i < s0; ++i)
        for (std::size_t j = 0; j < s2; ++j) m(i, j) = bulge(j, i);
      for (std::size_t i = 0; i < s1; ++i)
        for (std::size_t j = 0; j < s2; ++j) m(s0 + i, j) = as[tt + 1](j, i);
      DenseMat qt = detail::ql_reflect(m);

      // Two-block congruence on [[Ad[tt], As[tt]^T], [As[tt], Ad[tt+1]]].
      DenseMat s2m(s0 + s1, s0 + s1);
      for (std::size_t i = 0; i < s0; ++i)
        for (std::size_t j = 0; j < s0; ++j) s2m(i, j) = ad[tt](i, j);
      for (std::size_t i = 0; i < s1; ++i)
        for (std::size_t j = 0; j < s1; ++j) s2m(s0 + i, s0 + j) = ad[tt + 1](i, j);
      for (std::size_t i = 0; i < s1; ++i)
        for (std::size_t j = 0; j < s0; ++j) {
          s2m(s0 + i, j) = as[tt](i, j);
          s2m(j, s0 + i) = as[tt](i, j);
        }
      DenseMat rot = dense_mul_nt(dense_mul(qt, s2m), qt);
      symmetrize(rot);
      for (std::size_t i = 0; i < s0; ++i)
        for (std::size_t j = 0; j < s0; ++j) ad[tt](i, j) = rot(i, j);
      for (std::size_t i = 0; i < s1; ++i)
        for (std::size_t j = 0; j < s1; ++j) ad[tt + 1](i, j) = rot(s0 + i, s0 + j);
      for (std::size_t i = 0; i < s1; ++i)
        for (std::size_t j = 0; j < s0; ++j) as[tt](i, j) = rot(s0 + i, j);

      // Row block tt+2: [bulge | As[tt+1]] Q = [0 | L^T], already in m.
      for (std::size_t i = 0; i < s2; ++i)
        for (std::size_t j = 0; j < s1; ++j) as[tt + 1](i, j) = m(s0 + j, i);

      // Column block tt-1: [As[tt-1]; 0] <- Qt [As[tt-1]; 0].
      if (tt > 0) {
        const std::size_t sm = bsize(tt - 1);
        DenseMat colm(s0 + s1, sm);
        for (std::size_t i = 0; i < s0; ++i)
          for (std::size_t j = 0; j < sm; ++j) colm(i, j) = as[tt - 1](i, j);
        colm = dense_mul(qt, colm);
        for (std::size_t i = 0; i < s0; ++i)
          for (std::size_t j = 0; j < sm; ++j) as[tt - 1](i, j) = colm(i, j);
        bulge = DenseMat(s1, sm);
        for (std::size_t i = 0; i < s1; ++i)
          for (std::size_t j = 0; j < sm; ++j) bulge(i, j) = colm(s0 + i, j);
        have_bulge = true;
      } else {
        have_bulge = false;
      }
      if (want_vectors) steps.push_back({CongruenceStep::Kind::Rotate, tt, qt});
      t = tt;
    }
  }

  // Assemble the reduced standard-form matrix (still banded).
  const int cbw = static_cast<int>(std::min(2 * b - 1, n - 1));
  SymBanded c(n, cbw);
  for (std::size_t i = 0; i < nblocks; ++i) {
    for (std::size_t r = 0; r < bsize(i); ++r)
      for (std::size_t cc = 0; cc <= r; ++cc)
        c.at_lower(i * b + r, i * b + cc) = ad[i](r, cc);
    if (i + 1 < nblocks)
      for (std::size_t r = 0; r < bsize(i + 1); ++r)
        for (std::size_t cc = 0; cc < bsize(i); ++cc)
          c.at_lower((i + 1) * b + r, i * b + cc) = as[i](r, cc);
  }

  TridiagResult tri = band_to_tridiag(c);
  DenseMat z;
  if (want_vectors) z = DenseMat::eye(n);
  tridiag_ql(tri.diag, tri.off, want_vectors ? &z : nullptr);

  if (want_vectors) {
    tri.log.apply_inverse_to_rows(z);
    // V = P^T W: replay the congruence steps in reverse.
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      const std::size_t r0 = it->block * b;
      switch (it->kind) {
      case CongruenceStep::Kind::Scale: {
        const DenseMat& l = it->m;
        const std::size_t sb = l.rows;
        for (std::size_t ii = sb; ii-- > 0;)
          for (std::size_t j = 0; j < z.cols; ++j) {
            double v = z(r0 + ii, j);
            for (std::size_t k = ii + 1; k < sb; ++k)
              v -= l(k, ii) * z(r0 + k, j);
            z(r0 + ii, j) = v / l(ii, ii);
          }
        break;
      }
      case CongruenceStep::Kind::Elim: {
        const DenseMat& g = it->m; // rows_I -= G^T rows_{I+1}
        const std::size_t r1 = (it->block + 1) * b;
        for (std::size_t i = 0; i < g.cols; ++i)
          for (std::size_t j = 0; j < z.cols; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < g.rows; ++k)
              acc += g(k, i) * z(r1 + k, j);
            z(r0 + i, j) -= acc;
          }
        break;
      }
      case CongruenceStep::Kind::Rotate: {
        const DenseMat& qt = it->m; // rows_pair <- Qt^T rows_pair
        const std::size_t sz = qt.rows;
        DenseMat tmp(sz, z.cols);
        for (std::size_t i = 0; i < sz; ++i)
          for (std::size_t j = 0; j < z.cols; ++j) tmp(i, j) = z(r0 + i, j);
        DenseMat out = dense_mul_tn(qt, tmp);
        for (std::size_t i = 0; i < sz; ++i)
          for (std::size_t j = 0; j < z.cols; ++j) z(r0 + i, j) = out(i, j);
        break;
      }
      }
    }
  }

  sort_spectral(tri.diag, want_vectors ? &z : nullptr);
  res.values = std::move(tri.diag);
  if (want_vectors) res.vectors = std::move(z);
  return res;
}

RayleighResult rayleigh_iterate(const Pencil& p, std::vector<double> v0,
                                int max_it) {
  const std::size_t n = p.dim();
  if (v0.size() != n) throw DimensionError("rayleigh v0 size mismatch");
  double nrm = 0.0;
  for (double x : v0) nrm += x * x;
  nrm = std::sqrt(nrm);
  if (nrm == 0.0) throw DimensionError("rayleigh v0 is zero");
  for (double& x : v0) x /= nrm;

  auto quotient = [&](const std::vector<double>& v) {
    const std::vector<double> av = p.a.apply(v);
    const std::vector<double> bv = p.b.apply(v);
    double va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      va += v[i] * av[i];
      vb += v[i] * bv[i];
    }
    return va / vb;
  };
  auto residual = [&](const std::vector<double>& v, double lam) {
    const std::vector<double> av = p.a.apply(v);
    const std::vector<double> bv = p.b.apply(v);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = av[i] - lam * bv[i];
      r += e * e;
    }
    return std::sqrt(r);
  };

  RayleighResult res;
  res.v = std::move(v0);
  res.lambda = quotient(res.v);
  res.residual_history.push_back(residual(res.v, res.lambda));

  for (int it = 0; it < max_it; ++it) {
    std::vector<double> x;
    double shift = res.lambda;
    for (int attempt = 0;; ++attempt) {
      try {
        const LdltResult fac = ldlt_banded(p.a, shift, &p.b);
        x = fac.solve(res.v);
        break;
      } catch (const BreakdownError&) {
        if (attempt >= 1) throw;
        shift += std::sqrt(kEps) * (1.0 + std::abs(shift));
      }
    }
    double xn = 0.0;
    for (double xv : x) xn += xv * xv;
    xn = std::sqrt(xn);
    if (!std::isfinite(xn) || xn == 0.0) {
      // Overflow from a near-exact shift: renormalize by the largest entry.
      double mx = 0.0;
      for (double xv : x)
        if (std::isfinite(xv)) mx = std::max(mx, std::abs(xv));
      if (mx == 0.0)
        throw IterationLimitError("rayleigh iteration produced no direction");
      for (double& xv : x) xv = std::isfinite(xv) ? xv / mx : (xv > 0 ? 1.0 : -1.0);
      xn = 0.0;
      for (double xv : x) xn += xv * xv;
      xn = std::sqrt(xn);
    }
    for (double& xv : x) xv /= xn;
    res.v = std::move(x);
    const double lam_new = quotient(res.v);
    res.residual_history.push_back(residual(res.v, lam_new));
    ++res.iterations;
    const bool done = std::abs(lam_new - res.lambda) <= kEps * (1.0 + std::abs(res.lambda));
    res.lambda = lam_new;
    if (done) return res;
  }
  throw IterationLimitError("rayleigh iteration did not converge");
}

} // namespace symband
