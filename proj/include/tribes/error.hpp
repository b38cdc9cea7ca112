#pragma once

#include <stdexcept>
#include <string>

namespace tribes {

// Argument errors are reported with std::invalid_argument. The types below
// cover the domain failures callers are expected to branch on.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truth table would need more variables than the configured cap.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

/// No prefix of the tribes drives the failure product down to 1 - mu.
class MuNotAchievable : public Error {
 public:
  using Error::Error;
};

/// The bounds admit no tribe at all (m = 0).
class ConstructionInfeasible : public Error {
 public:
  using Error::Error;
};

/// Variance is zero, so a ratio against it is undefined.
class ConstantFunction : public Error {
 public:
  using Error::Error;
};

/// An analytic value disagrees with the value recomputed from definitions.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace tribes
