#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sortnetc {

enum class ErrorKind {
  unsupported_size,
  invalid_network,
  length_mismatch,
  too_many_wires,
  dimension_mismatch,
  too_large,
  infeasible_config,
  placement_failure,
  precision_insufficient,
  position_out_of_bounds,
  invalid_argument,
  parse_error,
  file_io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library. `kind()` is stable and is what the
/// CLI reports in its structured error output.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sortnetc
