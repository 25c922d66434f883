#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sortnetc/report.hpp"

namespace sortnetc::cli {

struct DispatchResult {
  int exit_code = 0;
  /// Present on success; failed runs report a structured error instead.
  std::optional<RunReport> report;
};

/// Runs one CLI invocation. `args` excludes the program name. Primary data
/// (CSV tables, networks, codes) goes to `out`; the run report goes to the
/// --report file when given, otherwise to `out` if nothing else was written
/// there, otherwise to `err`.
DispatchResult dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sortnetc::cli
