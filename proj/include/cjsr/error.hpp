#pragma once

#include <stdexcept>
#include <string>

namespace cjsr {

enum class ErrorCode {
  InvalidConstraint,
  InvalidSymbol,
  WrongLength,
  UnsupportedLength,
  EmptyConstraint,
  DeadEnd,
  InvalidMatrix,
  AlphabetMismatch,
  ParseError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConstraint: return "InvalidConstraint";
    case ErrorCode::InvalidSymbol: return "InvalidSymbol";
    case ErrorCode::WrongLength: return "WrongLength";
    case ErrorCode::UnsupportedLength: return "UnsupportedLength";
    case ErrorCode::EmptyConstraint: return "EmptyConstraint";
    case ErrorCode::DeadEnd: return "DeadEnd";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cjsr
