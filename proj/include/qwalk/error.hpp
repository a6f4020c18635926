#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

enum class ErrorCode {
  NonPositiveProbability,
  SumNotOne,
  ParityMismatch,
  ParityViolation,
  OutOfRange,
  CapacityExceeded,
  CapTooLarge,
  WindowViolation,
  NegativeArgument,
  ZeroUnsupported,
  InvalidArgument,
  BudgetExhausted,
  ParseError,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace qwalk
