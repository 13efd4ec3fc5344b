#pragma once

#include <stdexcept>
#include <string>

namespace snowlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: non-square matrix, non-finite entry, dimension mismatch.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of an operation (e.g. s not in the range of h).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Duplicate points, zero vectors, flat unit balls.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class InvalidSnowflakeError : public Error {
 public:
  using Error::Error;
};

class IterationLimitError : public Error {
 public:
  IterationLimitError(const std::string& what, double last_residual, int iterations)
      : Error(what), last_residual_(last_residual), iterations_(iterations) {}
  double last_residual() const { return last_residual_; }
  int iterations() const { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

/// No finite threshold T(t) exists (c(S) never drops to c(t)/2).
class UnboundedThresholdError : public Error {
 public:
  using Error::Error;
};

/// No positive threshold T~(S) exists (c(t) never climbs to 2 c(S) as t -> 0).
class ZeroThresholdError : public Error {
 public:
  using Error::Error;
};

class SearchRangeError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  RangeError(const std::string& what, double required_length)
      : Error(what), required_length_(required_length) {}
  double required_length() const { return required_length_; }

 private:
  double required_length_;
};

class UnavailableBoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace snowlab
