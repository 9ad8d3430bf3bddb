#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vfkit {

/// Malformed expression or system-file text. Line and column are 1-based.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what + " at line " + std::to_string(line) + ", column " +
                           std::to_string(column)),
        message_(what), line_(line), column_(column) {}

  /// Message without the position suffix.
  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

private:
  std::string message_;
  int line_;
  int column_;
};

/// Numeric evaluation hit a pole of a division node.
class DivisionByZero : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// An operation that needs polynomial input received something else.
class NotPolynomial : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A bracket or membership pipeline met a division that does not cancel to
/// a smooth (polynomial or flat-guarded) form.
class NonSmooth : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A flow left the domain of the field being integrated.
class DomainExit : public std::runtime_error {
public:
  DomainExit(const std::string& what, std::size_t step, double time)
      : std::runtime_error(what), step_(step), time_(time) {}

  /// Index of the failing step inside a flow word (0 for a single flow).
  std::size_t step() const { return step_; }
  /// Integration time at which the exit was detected.
  double time() const { return time_; }

private:
  std::size_t step_;
  double time_;
};

/// Integration failed: blow-up, bounding-box escape, or non-finite state.
class IntegrationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace vfkit
