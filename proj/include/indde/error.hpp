#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace indde {

enum class ErrorCode {
  syntax,
  unknown_identifier,
  unbalanced_parentheses,
  mixed_variables,
  non_integer_exponent,
  division_by_zero,
  wrong_variable,
  non_finite,
  invalid_argument,
  out_of_range,
  nonpositive_v,
  non_empty_impulses,
  q_too_large,
  recovery_diverged,
  impulse_delay_collision,
  not_converged,
  too_few_points,
  spec_file,
  io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Expression syntax error; `offset` is the byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& what, std::size_t offset)
      : Error(code, what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Spec-file error with a 1-based line (and column when known, else 0).
class SpecFileError : public Error {
 public:
  SpecFileError(const std::string& what, std::size_t line, std::size_t column = 0)
      : Error(ErrorCode::spec_file, format(what, line, column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    std::string out = "line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

/// A failure during time stepping, tagged with the simulation time.
class SimulationError : public Error {
 public:
  SimulationError(ErrorCode code, const std::string& what, double time)
      : Error(code, what + " (t=" + std::to_string(time) + ")"), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace indde
