#pragma once
#include <stdexcept>
#include <string>

namespace hardy {

/// Base class for every failure this library raises on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed user-facing input: bad schema, unknown keys, out-of-range parameters.
/// CLI maps this family to exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

/// Array / grid size mismatches in user-provided data.
struct ShapeError : ConfigError {
  using ConfigError::ConfigError;
};

/// Everything below is a numerical guard; the CLI maps these to exit code 3.

/// Pointwise math-domain violation (e.g. log of a non-positive boundary value).
struct DomainError : Error {
  using Error::Error;
};

/// Weight density failed positivity or resolution.
struct WeightError : Error {
  using Error::Error;
};

/// A truncation was too aggressive: ill-conditioned Gram, series tail above
/// guard, decomposition residual above guard.
struct TruncationError : Error {
  using Error::Error;
};

/// Degenerate or inadmissible constraint data.
struct ConstraintError : Error {
  using Error::Error;
};

/// Evaluation outside the region of validity (boundary or exterior point).
struct EvaluationError : Error {
  using Error::Error;
};

/// Operation not defined for this domain kind.
struct UnsupportedError : Error {
  using Error::Error;
};

}  // namespace hardy
