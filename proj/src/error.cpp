#include "roughsde/error.hpp"

namespace roughsde {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::invalid_window: return "invalid-window";
    case ErrorKind::invalid_initial_condition: return "invalid-initial-condition";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::contract_violation: return "contract-violation";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::resource_error: return "resource-error";
    case ErrorKind::internal_error: return "internal-error";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace roughsde
