#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace parry {

// Common base so callers can catch everything from this library at once.
// The CLI maps the subclasses onto its exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed substitution spec document (bad JSON, bad shorthand, missing fields).
struct SyntaxError : Error {
  using Error::Error;
};

// Structurally out-of-range values: negative exponent, m < 1, p < 0, oversized alphabet.
struct RangeError : Error {
  using Error::Error;
};

// A Parry exponent constraint failed. `constraint` names the violated rule.
struct ConstraintViolation : Error {
  std::string constraint;
  ConstraintViolation(std::string which, const std::string& msg)
      : Error(msg), constraint(std::move(which)) {}
};

// A configured cap (prefix length, state count, scan budget) was exceeded.
struct ResourceLimit : Error {
  using Error::Error;
};

// Eigenvalue/root computation did not converge or produced non-finite values.
struct NumericalFailure : Error {
  using Error::Error;
};

// A digit outside {0,...,alpha_0} was supplied.
struct DigitRange : Error {
  using Error::Error;
};

// The empty digit string (n = 0) was fed to an evaluator.
struct EmptyInput : Error {
  using Error::Error;
};

// Inconsistent table sizes when assembling or importing an automaton.
struct ShapeMismatch : Error {
  using Error::Error;
};

// A y-subscript left [-r, s] in the digit-transition transform: the window
// constant L is too small for the requested step.
struct IndexOverflow : Error {
  using Error::Error;
};

// The verified implication behind the constant L failed on a scanned factor.
struct ConstantsTooSmall : Error {
  using Error::Error;
};

}  // namespace parry
