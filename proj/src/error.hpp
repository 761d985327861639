#pragma once

#include <stdexcept>
#include <string>

namespace dyn {

enum class ErrorCode {
  argument = 1,
  inexact_division = 2,
  budget_exceeded = 3,
  internal = 4,
  parse = 5,
  io = 6,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& w) : Error(ErrorCode::argument, w) {}
};

struct InexactDivisionError : Error {
  explicit InexactDivisionError(const std::string& w) : Error(ErrorCode::inexact_division, w) {}
};

struct BudgetExceededError : Error {
  explicit BudgetExceededError(const std::string& w) : Error(ErrorCode::budget_exceeded, w) {}
};

struct InternalError : Error {
  explicit InternalError(const std::string& w) : Error(ErrorCode::internal, w) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ErrorCode::parse, w) {}
};

} // namespace dyn
