#pragma once

#include <cstddef>
#include <vector>

#include "symband/banded.hpp"
#include "symband/dense.hpp"

namespace symband {

/// Congruence plane-rotation log from a band reduction: the reduced matrix T
/// satisfies T = P S P^T with P the recorded rotation product.
struct RotationLog {
  std::vector<GivensRotation> rots;

  /// m <- P^T m (recovers eigenvectors of S from eigenvectors of T).
  void apply_inverse_to_rows(DenseMat& m) const;
};

/// Reduce a symmetric banded matrix to half-bandwidth `target` by adjacent
/// plane rotations, chasing each bulge up and off the top of the matrix.
SymBanded reduce_bandwidth(const SymBanded& s, int target, RotationLog* log);

struct TridiagResult {
  std::vector<double> diag;
  std::vector<double> off; // off[i] couples i and i+1
  RotationLog log;

  /// Q with S = Q T Q^T, formed densely on demand.
  DenseMat accumulate_q(std::size_t n) const;
};

TridiagResult band_to_tridiag(const SymBanded& s);

struct SpectralResult {
  std::vector<double> values; // ascending
  DenseMat vectors;           // column k pairs with values[k]; empty unless requested

  bool has_vectors() const { return !vectors.empty(); }
};

/// Implicit-shift QL with Wilkinson shift. `z`, when given, accumulates the
/// rotations: on entry a basis with S = Z T Z^T, on exit S = Z Lambda Z^T.
/// Throws IterationLimitError after 50*dim sweeps.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, DenseMat* z);

SpectralResult tridiag_eig(std::vector<double> diag, std::vector<double> off,
                           bool want_vectors);
SpectralResult tridiag_eig(const SymBanded& t, bool want_vectors);

/// Full spectral decomposition of a symmetric banded matrix: band reduction,
/// tridiagonal QL, vectors replayed from the rotation log when requested.
SpectralResult sym_band_eig(const SymBanded& s, bool want_vectors);

/// Symmetric-definite banded generalized eigensolver. B is factorized
/// blockwise and eliminated under congruence while plane reflections chase
/// the fill in A up through the already-reduced region, so the intermediate
/// standard-form matrix stays banded (half-bandwidth < 2b) throughout.
/// Eigenvectors are B-orthogonal: V^T B V = I.
SpectralResult gen_sym_band_eig(const Pencil& p, bool want_vectors);

struct RayleighResult {
  double lambda = 0.0;
  std::vector<double> v;
  std::vector<double> residual_history; // ||A v - lambda B v||_2 per iteration
  int iterations = 0;
};

/// General Rayleigh quotient iteration on a symmetric-definite pencil with
/// banded LDL^T solves. Stops when |lambda_{k+1}-lambda_k| <= eps(1+|lambda|).
RayleighResult rayleigh_iterate(const Pencil& p, std::vector<double> v0,
                                int max_it);

} // namespace symband
