#include "specbgk/error.hpp"

namespace specbgk {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::invalid_potential: return "invalid potential";
    case ErrorKind::integration_failure: return "integration failure";
    case ErrorKind::precision_failure: return "precision failure";
    case ErrorKind::index_out_of_range: return "index out of range";
    case ErrorKind::insufficient_recurrence: return "insufficient recurrence";
    case ErrorKind::hypothesis_violation: return "hypothesis violation";
    case ErrorKind::solver_failure: return "solver failure";
  }
  return "unknown";
}

}  // namespace specbgk
