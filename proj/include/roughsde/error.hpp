#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace roughsde {

enum class ErrorKind {
  invalid_parameter,
  invalid_window,
  invalid_initial_condition,
  invalid_input,
  contract_violation,
  non_convergence,
  insufficient_data,
  resource_error,
  internal_error,
  io_error,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` drives the
// CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace roughsde
