#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lpiso {

enum class ErrorCode {
  SingularMatrix,
  NotSymmetric,
  GuardViolation,
  SingularPoint,
  InvalidExponent,
  SingularOnDomain,
  DomainMismatch,
  InvalidParams,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Numeric precondition failures (singular inputs, guards) versus malformed
// input. The CLI maps the former to exit code 2 and the latter to 1.
bool is_numeric_precondition(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lpiso
