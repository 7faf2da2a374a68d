#include "tvbayes/harness/report.hpp"

#include <cmath>

#include "tvbayes/errors.hpp"
#include "tvbayes/harness/io.hpp"

namespace tvbayes {

nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json RunReport::to_json() const {
  if (trace.size() != static_cast<std::size_t>(iterations)) {
    throw DomainError("RunReport: trace length differs from the iteration count");
  }
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["estimator"] = estimator;
  j["config"] = config;
  j["lattice"] = {{"rows", rows}, {"cols", cols}};
  nlohmann::json xs = nlohmann::json::array();
  for (Index i = 0; i < x.size(); ++i) xs.push_back(json_number(x[i]));
  j["estimates"] = {{"x", xs},
                    {"nu", nu ? json_number(*nu) : nlohmann::json(nullptr)},
                    {"lambda", lambda ? json_number(*lambda) : nlohmann::json(nullptr)}};
  j["iterations"] = iterations;
  j["converged"] = converged;
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : trace) {
    nlohmann::json entry = nlohmann::json::object();
    for (std::size_t k = 0; k < trace_columns.size() && k < row.size(); ++k) {
      entry[trace_columns[k]] = json_number(row[k]);
    }
    rows_json.push_back(entry);
  }
  j["trace"] = rows_json;
  if (metrics) {
    j["metrics"] = {{"rel_l2", json_number(metrics->rel_l2)}, {"psnr", json_number(metrics->psnr)}};
  } else {
    j["metrics"] = nullptr;
  }
  j["wall_time_s"] = wall_time_s;
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  j["extra"] = extra;
  j["outputs"] = outputs;
  return j;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

}  // namespace tvbayes
