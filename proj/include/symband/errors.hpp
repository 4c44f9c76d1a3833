#pragma once

#include <stdexcept>
#include <string>

namespace symband {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

/// Writing a nonzero value outside the declared band.
class OutOfBandWrite : public Error {
public:
  using Error::Error;
};

/// Zero diagonal met while inverting an upper-triangular conversion.
class SingularConversionError : public Error {
public:
  using Error::Error;
};

/// Exact zero pivot in an unpivoted LDL^T factorization.
class BreakdownError : public Error {
public:
  using Error::Error;
};

class NotPositiveDefiniteError : public Error {
public:
  using Error::Error;
};

class UnsupportedOperatorError : public Error {
public:
  using Error::Error;
};

/// Standard annihilator construction hit a singular or numerically
/// rank-deficient local system; the pathological method applies.
class PathologicalInputError : public Error {
public:
  explicit PathologicalInputError(const std::string& what, std::size_t column)
      : Error(what), column_(column) {}
  std::size_t column() const { return column_; }

private:
  std::size_t column_ = 0;
};

class InfeasibleBoundaryError : public Error {
public:
  using Error::Error;
};

/// Carries the symmetry and band defects measured during assembly.
class NotSelfAdjointError : public Error {
public:
  NotSelfAdjointError(const std::string& what, double symmetry_defect,
                      double band_defect)
      : Error(what), symmetry_defect_(symmetry_defect),
        band_defect_(band_defect) {}
  double symmetry_defect() const { return symmetry_defect_; }
  double band_defect() const { return band_defect_; }

private:
  double symmetry_defect_ = 0;
  double band_defect_ = 0;
};

class NotSkewAdjointError : public Error {
public:
  using Error::Error;
};

class IterationLimitError : public Error {
public:
  using Error::Error;
};

class WindowCapError : public Error {
public:
  using Error::Error;
};

class PencilConditioningError : public Error {
public:
  using Error::Error;
};

class FunctionDomainError : public Error {
public:
  using Error::Error;
};

class SpecValidationError : public Error {
public:
  using Error::Error;
};

} // namespace symband
