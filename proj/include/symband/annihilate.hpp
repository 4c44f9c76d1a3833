#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "symband/banded.hpp"

namespace symband {

/// Infinite matrix of boundary functionals: entry(i, n) is the action of
/// functional i on basis element n. Rows are generated on demand.
class BoundaryFunctionals {
public:
  using Generator = std::function<double(std::size_t row, std::size_t col)>;

  BoundaryFunctionals(std::size_t count, Generator gen)
      : count_(count), gen_(std::move(gen)) {}

  std::size_t count() const { return count_; }
  double entry(std::size_t row, std::size_t col) const {
    return gen_(row, col);
  }

private:
  std::size_t count_;
  Generator gen_;
};

enum class AnnihilatorMethod { Standard, Pathological, Auto };

/// Banded conversion A with unit diagonal and 𝓑A = 0, together with its
/// banded QR factors (A = Q R).
struct Annihilator {
  BandedMatrix a;
  GivensSequence q;
  BandedMatrix r;
  AnnihilatorMethod method = AnnihilatorMethod::Standard;
  std::size_t conditions = 0;

  /// max_k ||B * A(:,k)||_inf / (local row scale), over the first `cols`
  /// columns.
  double residual(const BoundaryFunctionals& bc, std::size_t cols) const;
};

/// Column k solves the square local system by pivoted LU; a singular or
/// ill-conditioned system (cond > eps^{-1/2}) raises PathologicalInputError.
Annihilator build_standard(const BoundaryFunctionals& bc, std::size_t ncols);

/// Doubled-bandwidth fallback: minimum 2-norm column solutions through a
/// Moore-Penrose pseudoinverse with singular values below eps^{3/4} sigma_max
/// treated as zero.
Annihilator build_pathological(const BoundaryFunctionals& bc,
                               std::size_t ncols);

/// Per-column standard with per-column pathological fallback; the bandwidth
/// is uniformly doubled as soon as any column falls back.
Annihilator build_auto(const BoundaryFunctionals& bc, std::size_t ncols);

/// The column/row-sum bound on ||A||_{l2->l2} for two-condition
/// annihilators, evaluated over the first up_to columns.
double boundedness_probe(const Annihilator& ann, std::size_t up_to);

/// Same bound for the non-banded first-two-elements recombination
/// phi_n + a0 phi_0 + a1 phi_1 (comparison mode, not a library method).
double first_two_recombination_probe(const BoundaryFunctionals& bc,
                                     std::size_t up_to);

} // namespace symband
