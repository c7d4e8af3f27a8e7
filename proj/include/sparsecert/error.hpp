#pragma once

#include <stdexcept>
#include <string>

namespace sparsecert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong shapes, out-of-range indices, non-finite entries.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A matrix that should have full rank is numerically singular.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double sigma)
      : Error(what), sigma_(sigma) {}
  /// The offending singular value.
  double sigma() const noexcept { return sigma_; }

 private:
  double sigma_;
};

/// A combinatorial enumeration would exceed the configured subset budget.
class BudgetExceededError : public Error {
 public:
  BudgetExceededError(const std::string& what, double requested, double budget)
      : Error(what), requested_(requested), budget_(budget) {}
  double requested() const noexcept { return requested_; }
  double budget() const noexcept { return budget_; }

 private:
  double requested_;
  double budget_;
};

/// A theorem hypothesis or operation precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a formula (poles, angle ranges).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The oracle spectrum only handles short sides up to 4.
class UnsupportedSizeError : public Error {
 public:
  using Error::Error;
};

/// Text input could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparsecert
