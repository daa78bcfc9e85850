#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace robba {

/// Machine-readable classification of every failure the library reports.
enum class ErrorCode {
  InvalidInput,
  NotIntegral,
  NonUnit,
  IntegralObstruction,
  Integrality,
  InsufficientWindow,
  CannotDetermineDegree,
  DisjointWindows,
  NotFramed,
  Syntax,
  MissingOMarker,
  ExponentOutOfWindow,
  Usage,
  Io,
};

/// Stable identifier used in structured error output ("non_unit", ...).
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// A 1-form with a nonzero u^-1 du term cannot be integrated; the residue is
/// kept in printed form so the error stays independent of the coefficient
/// machinery.
class ObstructionError : public Error {
public:
  ObstructionError(const std::string& what, std::string residue)
      : Error(ErrorCode::IntegralObstruction, what), residue_(std::move(residue)) {}

  const std::string& residue() const noexcept { return residue_; }

private:
  std::string residue_;
};

/// Parse failures carry a 1-based line/column position.
class SyntaxError : public Error {
public:
  SyntaxError(ErrorCode code, const std::string& what, int line, int column)
      : Error(code, what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  int line_;
  int column_;
};

}  // namespace robba
