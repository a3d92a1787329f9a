#pragma once

#include <stdexcept>
#include <string>

namespace cvqkd {

/// Bad shapes, out-of-range parameters, mismatched dimensions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for every failure that originates in the numerics or the physics
/// rather than in the caller's arguments.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A covariance matrix (or an attack) that does not describe a physical state.
class UnphysicalState : public Error {
 public:
  using Error::Error;
};

/// Eigenvalues of Omega*V that do not pair up as +-i nu, singular
/// conditioning blocks, residuals that miss their tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of an entropy function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Threshold bracket exceeded its cap without the rate turning negative.
class DivergentThreshold : public Error {
 public:
  using Error::Error;
};

/// Rate was not decreasing in omega while the bracket was being grown.
class MonotonicityError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvqkd
