#include "sortnetc/report.hpp"

#include <cmath>

namespace sortnetc {

namespace {

// integral metrics are written as JSON integers so large counts read naturally
nlohmann::json metric_value(double v) {
  if (std::isfinite(v) && std::floor(v) == v && std::abs(v) < 0x1p53) {
    return static_cast<std::int64_t>(v);
  }
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

void to_json(nlohmann::json& j, const RunReport& r) {
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = metric_value(v);
  j = nlohmann::json{{"command", r.command},
                     {"config", r.config},
                     {"seed", r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr)},
                     {"outputs", r.outputs},
                     {"metrics", std::move(metrics)},
                     {"warnings", r.warnings},
                     {"details", r.details}};
}

void from_json(const nlohmann::json& j, RunReport& r) {
  r.command = j.at("command").get<std::string>();
  r.config = j.at("config");
  r.seed = j.at("seed").is_null() ? std::nullopt
                                  : std::optional<std::uint64_t>(j.at("seed").get<std::uint64_t>());
  r.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
  r.metrics.clear();
  for (const auto& [k, v] : j.at("metrics").items()) {
    r.metrics[k] = v.is_null() ? std::nan("") : v.get<double>();
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  r.details = j.at("details");
}

}  // namespace sortnetc
