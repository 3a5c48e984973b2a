#pragma once

#include <stdexcept>
#include <string>

namespace specbgk {

enum class ErrorKind {
  invalid_argument,
  invalid_potential,
  integration_failure,
  precision_failure,
  index_out_of_range,
  insufficient_recurrence,
  hypothesis_violation,
  solver_failure,
};

/// Library-wide exception. `kind()` lets drivers map failures to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace specbgk
