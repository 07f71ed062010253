#pragma once

#include <stdexcept>
#include <string>

namespace holonomy {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on shapes, ranges or structure was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Input columns are (numerically) linearly dependent.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Two nonzero eigenvalues are closer than the degeneracy gap.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

// A density matrix does not lie on the expected coadjoint orbit.
class NotOnOrbitError : public Error {
 public:
  using Error::Error;
};

// A frame falls outside the domain of a local chart.
class OutsideChartError : public Error {
 public:
  using Error::Error;
};

// Consecutive path samples are too far apart to be aligned reliably.
class StepTooLargeError : public Error {
 public:
  StepTooLargeError(const std::string& what, double s, int level)
      : Error(what), s_(s), level_(level) {}
  double s() const noexcept { return s_; }
  int level() const noexcept { return level_; }

 private:
  double s_;
  int level_;
};

// The Pancharatnam lift is undefined: a component is orthogonal to the reference.
class LiftUndefinedError : public Error {
 public:
  LiftUndefinedError(const std::string& what, double s, int level)
      : Error(what), s_(s), level_(level) {}
  double s() const noexcept { return s_; }
  int level() const noexcept { return level_; }

 private:
  double s_;
  int level_;
};

// An iterative refinement stopped before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double previous, double last)
      : Error(what), previous_(previous), last_(last) {}
  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

class QuadratureError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

}  // namespace holonomy
