#pragma once

#include <stdexcept>
#include <string>

namespace diffs1 {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input shape or parameter (length mismatch, grid mismatch, bad option).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A sanity check on an intermediate result failed.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Inversion of a multiplier was requested for data with content on a kernel mode.
class RangeViolation : public Error {
 public:
  RangeViolation(int mode, double magnitude, double allowed)
      : Error("range violation: mode " + std::to_string(mode) + " carries |c| = " +
              std::to_string(magnitude) + " (allowed " + std::to_string(allowed) + ")"),
        mode_(mode),
        magnitude_(magnitude) {}

  int mode() const noexcept { return mode_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  int mode_;
  double magnitude_;
};

/// Inputs exceed the band that a spectral computation can resolve exactly.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A displacement field does not define an orientation-preserving diffeomorphism.
class NotADiffeomorphism : public Error {
 public:
  using Error::Error;
};

/// The symbol-condition checker only handles multipliers of order r >= 1.
class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

/// A discrete path or data set failed a consistency check.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Constraint points are not distinct or the interpolation system is singular.
class DegeneratePoints : public Error {
 public:
  using Error::Error;
};

/// Re-projection could not bring a constrained state back onto its constraint.
class ConstraintDriftError : public Error {
 public:
  using Error::Error;
};

/// A geodesic left the chart before the requested time.
class OutsideDomain : public Error {
 public:
  OutsideDomain(const std::string& what, double attained_time)
      : Error(what), attained_time_(attained_time) {}
  double attained_time() const noexcept { return attained_time_; }

 private:
  double attained_time_;
};

/// Shooting did not converge: the target is outside the observed normal neighbourhood.
class OutsideNormalNeighborhood : public Error {
 public:
  using Error::Error;
};

}  // namespace diffs1
