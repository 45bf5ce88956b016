#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mepstring {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An energy, gradient, or Hessian evaluation produced NaN or infinity.
struct NonFinite : Error {
  using Error::Error;
};

/// A trajectory left the computational box by more than 10% of its diagonal.
struct DomainEscape : Error {
  using Error::Error;
};

/// All images of a string coincide (total arc length is zero).
struct DegenerateString : Error {
  using Error::Error;
};

/// Interpolation query outside the knot range.
struct OutOfRange : Error {
  using Error::Error;
};

/// Interpolation knots are not strictly increasing.
struct BadKnots : Error {
  using Error::Error;
};

/// Central-difference tangent is numerically zero at a non-skipped image.
struct DegenerateTangent : Error {
  using Error::Error;
};

/// An endpoint passed to initial_string does not classify as a minimum.
struct NotAMinimum : Error {
  using Error::Error;
};

/// The maximum-energy image of a string is an endpoint.
struct NoInteriorMax : Error {
  using Error::Error;
};

/// The adaptive reference flow exceeded its substep budget.
struct StepLimit : Error {
  using Error::Error;
};

/// Rejection sampling could not produce a curve within the requested distance.
struct SamplingFailure : Error {
  using Error::Error;
};

/// File could not be read or written.
struct IoError : Error {
  using Error::Error;
};

/// Config text is not well-formed JSON.
struct ParseError : Error {
  using Error::Error;
};

/// Config is well-formed but violates the schema. Carries every violation
/// found, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "config validation failed:";
    for (const auto& s : issues) {
      out += "\n  - ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> issues_;
};

}  // namespace mepstring
