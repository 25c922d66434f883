#include "sortnetc/error.hpp"

namespace sortnetc {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::unsupported_size: return "unsupported-size";
    case ErrorKind::invalid_network: return "invalid-network";
    case ErrorKind::length_mismatch: return "length-mismatch";
    case ErrorKind::too_many_wires: return "too-many-wires";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::too_large: return "too-large";
    case ErrorKind::infeasible_config: return "infeasible-config";
    case ErrorKind::placement_failure: return "placement-failure";
    case ErrorKind::precision_insufficient: return "precision-insufficient";
    case ErrorKind::position_out_of_bounds: return "position-out-of-bounds";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::file_io: return "file-io";
  }
  return "unknown";
}

}  // namespace sortnetc
