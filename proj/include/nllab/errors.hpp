#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nllab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (non-Hermitian input,
/// mismatched dimensions, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A quantity that is undefined for the given input (0/0 ratios,
/// zero-probability records).
class UndefinedQuantity : public Error {
 public:
  using Error::Error;
};

/// Structural validation failure. Carries the offending grid cell when one
/// can be named.
class ValidationError : public Error {
 public:
  struct Cell {
    int row;
    int col;
  };

  explicit ValidationError(const std::string& what,
                           std::optional<Cell> cell = std::nullopt)
      : Error(what), cell_(cell) {}

  const std::optional<Cell>& cell() const { return cell_; }

 private:
  std::optional<Cell> cell_;
};

/// A numerical search produced no usable result.
class EstimationFailed : public Error {
 public:
  using Error::Error;
};

/// An iterative construction did not finish. `trace` lists the steps
/// taken before giving up.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<std::string> trace)
      : Error(what), trace_(std::move(trace)) {}

  const std::vector<std::string>& trace() const { return trace_; }

 private:
  std::vector<std::string> trace_;
};

/// Input text or file could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace nllab
