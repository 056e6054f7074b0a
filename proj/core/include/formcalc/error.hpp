#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace formcalc {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t offset,
             std::vector<std::string> expected = {});

  /// Byte offset into the input where parsing stopped.
  std::size_t offset() const noexcept { return offset_; }
  /// Tokens that would have been accepted at offset(); may be empty.
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Numeric evaluation failure: an unbound variable or a non-finite value.
class EvalError : public Error {
 public:
  enum class Kind { UnboundVariable, NonFinite };

  EvalError(Kind kind, std::string subexpression, std::string message)
      : Error(std::move(message)),
        kind_(kind),
        subexpression_(std::move(subexpression)) {}

  Kind kind() const noexcept { return kind_; }
  /// Printed form of the offending subexpression (or the variable name).
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  Kind kind_;
  std::string subexpression_;
};

/// Inconsistent inputs: bad intervals, mismatched boxes or degrees, points
/// outside a domain, non-planar surfaces handed to planar verifiers.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A field failed the zero test that guarantees a potential exists.
class NotClosedError : public Error {
 public:
  NotClosedError(std::string message, double max_residual)
      : Error(std::move(message)), max_residual_(max_residual) {}

  double max_residual() const noexcept { return max_residual_; }

 private:
  double max_residual_;
};

}  // namespace formcalc
