#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sortnetc {

/// Machine-readable record of one CLI run. Self-contained: the effective
/// configuration is embedded.
struct RunReport {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string> outputs;
  std::map<std::string, double> metrics;
  std::vector<std::string> warnings;
  /// Command-specific structured payload (verdict lists, tables, ...).
  nlohmann::json details = nlohmann::json::object();

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

void to_json(nlohmann::json& j, const RunReport& r);
void from_json(const nlohmann::json& j, RunReport& r);

}  // namespace sortnetc
