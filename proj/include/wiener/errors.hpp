#pragma once

#include <stdexcept>
#include <string>

namespace wiener {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument or parameter range. `field` names the offending input.
class InvalidArgument : public Error {
 public:
  InvalidArgument(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Weight specification string could not be parsed.
class ParseError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A declared weight family failed grid verification.
class FamilyMismatch : public Error {
 public:
  FamilyMismatch(const std::string& what, double witness)
      : Error(what), witness_(witness) {}
  double witness() const noexcept { return witness_; }

 private:
  double witness_;
};

/// A weighted series does not converge for the given exponents.
class DivergentSeries : public Error {
 public:
  using Error::Error;
};

/// A scan or summation hit its work cap before its stopping rule fired.
class ScanCapExceeded : public Error {
 public:
  using Error::Error;
};

/// Predictor requested outside the regime it is valid for.
class RegimeMismatch : public Error {
 public:
  using Error::Error;
};

/// Combinatorial or memory guard of a brute-force routine was exceeded.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

/// Integer count does not fit the count type.
class CountOverflow : public Error {
 public:
  using Error::Error;
};

}  // namespace wiener
