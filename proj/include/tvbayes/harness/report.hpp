#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvbayes/harness/metrics.hpp"
#include "tvbayes/types.hpp"

namespace tvbayes {

inline constexpr int kReportSchemaVersion = 1;

/// Serialised outcome of one CLI run. Field names are stable; see
/// docs/report_schema.md.
struct RunReport {
  std::string estimator;
  nlohmann::json config = nlohmann::json::object();
  Index rows = 0;
  Index cols = 0;
  Vector x;
  std::optional<double> nu;
  std::optional<double> lambda;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> trace_columns;
  /// One row per iteration.
  std::vector<std::vector<double>> trace;
  std::optional<Metrics> metrics;
  double wall_time_s = 0.0;
  std::optional<std::uint64_t> seed;
  nlohmann::json extra = nlohmann::json::object();
  std::vector<std::string> outputs;

  nlohmann::json to_json() const;
};

/// Non-finite values become null.
nlohmann::json json_number(double v);

void write_json(const std::string& path, const nlohmann::json& doc);

}  // namespace tvbayes
