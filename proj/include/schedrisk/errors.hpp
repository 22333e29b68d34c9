#pragma once

#include <stdexcept>
#include <string>

namespace schedrisk {

/// Error raised while reading a text format. Carries the 1-based line
/// number when the failing location is known (0 otherwise).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Error raised when parsed data violates a structural invariant
/// (cycles, duplicate ids, references to unknown activities, ...).
/// Distinct from schedule infeasibility, which is reported as data.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace schedrisk
