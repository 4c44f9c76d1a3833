#pragma once

#include <cstddef>
#include <vector>

#include "symband/banded.hpp"

namespace symband {

enum class BasisKind {
  NormalizedLegendre,
  NormalizedJacobi,         // P~_n^{(alpha,beta)}
  WeightedNormalizedJacobi, // (1-x)^wp (1+x)^wq P~_n^{(alpha,beta)}
  WeightedLaguerre,         // e^{-x/2} L~_n^{(level)}
  FourierReal               // 1/sqrt(2pi), sin/ cos pairs
};

/// Basis identifier with parameters and an affine reference map
/// t = map_scale*x + map_shift. Basis functions carry the sqrt|map_scale|
/// factor that keeps them orthonormal in the physical variable.
struct BasisId {
  BasisKind kind = BasisKind::NormalizedLegendre;
  double alpha = 0.0, beta = 0.0;
  double wp = 0.0, wq = 0.0;
  int level = 0; // Laguerre ladder parameter
  double map_scale = 1.0, map_shift = 0.0;

  static BasisId legendre();
  static BasisId jacobi(double a, double b);
  static BasisId weighted_jacobi(double p, double q, double a, double b);
  static BasisId weighted_laguerre(int level = 0);
  static BasisId fourier_real();

  /// Same basis re-expressed on t = scale*x + shift.
  BasisId with_map(double scale, double shift) const;

  bool polynomial() const { return kind != BasisKind::FourierReal; }
  bool operator==(const BasisId& o) const;
};

/// Finite expansion sum coeffs[n] * basis_n.
struct CoeffVec {
  BasisId basis;
  std::vector<double> coeffs;

  std::size_t degree_bound() const {
    return coeffs.empty() ? 0 : coeffs.size() - 1;
  }
  /// Drop trailing zeros (does not change the function).
  void trim();
  double eval(double x) const;
};

/// Symmetric tridiagonal operator of multiplication by the physical x.
SymBanded jacobi_operator(const BasisId& basis, std::size_t n);

/// Orthonormal three-term recurrence: x p_n = c_n p_{n+1} + a_n p_n +
/// c_{n-1} p_{n-1} in the reference variable.
struct Recurrence {
  std::vector<double> a; // diagonal
  std::vector<double> c; // off-diagonal, c[n] couples n and n+1
};
Recurrence recurrence_coeffs(const BasisId& basis, std::size_t n);

/// d/dx (physical variable) expressed from one basis into the next one on
/// the ladder. Supported pairs: weighted Jacobi (wp==alpha, wq==beta) to
/// (wp-1,wq-1,alpha-1,beta-1); Jacobi (alpha,beta) to (alpha+1,beta+1);
/// weighted Laguerre level a to a+1; FourierReal to itself.
BandedMatrix diff_operator(const BasisId& from, const BasisId& to,
                           std::size_t rows, std::size_t cols);

/// Upper-triangular banded conversion expressing source polynomials in the
/// target basis. Supported: identical bases; Jacobi parameter ascents by
/// whole steps (+1,+1) (weights carried along unchanged); Laguerre level
/// ascents.
BandedMatrix conversion_operator(const BasisId& from, const BasisId& to,
                                 std::size_t n);

/// Lower-triangular banded conversion of a boundary-satisfying weighted
/// trial basis into its free base basis, e.g. (1-x^2)P~^{(1,1)} columns in
/// normalized Legendre.
BandedMatrix weighted_trial_conversion(const BasisId& weighted,
                                       std::size_t rows, std::size_t cols);
/// The free base basis the weighted trial functions convert into.
BasisId trial_base_basis(const BasisId& weighted);

/// Clenshaw-Smith multiplication operator: f as an expansion in `f.basis`
/// (same family as `acting`), evaluated at the acting basis' Jacobi
/// operator; FourierReal multiplication uses the trigonometric product
/// rules. Half-bandwidth equals the (index) degree of f.
SymBanded multiplication_operator(const CoeffVec& f, const BasisId& acting,
                                  std::size_t n);

enum class FunctionalKind { Eval, Deriv };

/// Row of values (d^k/dx^k basis_n)(p), n = 0..length-1. Evaluation at
/// +-infinity is supported only where the weighted basis decays (zero row).
std::vector<double> boundary_row(const BasisId& basis, FunctionalKind kind,
                                 int order, double point, std::size_t length);

/// Coefficients of a monomial polynomial sum p[k] x^k in a polynomial basis
/// (via Horner on the Jacobi operator).
CoeffVec polynomial_coeffs(const BasisId& basis,
                           const std::vector<double>& monomial, std::size_t n);

/// Standard (unnormalized) Legendre values and first derivatives, used by
/// closed-form boundary recombinations.
double legendre_std(std::size_t n, double x);
double legendre_std_deriv(std::size_t n, double x);

/// Values of the orthonormal basis functions at x, n = 0..length-1.
std::vector<double> basis_values(const BasisId& basis, double x,
                                 std::size_t length);

} // namespace symband
