#include "report.hpp"

#include <cmath>

#include "fockdelay/format.hpp"

namespace fockdelay::cli {

Json number(double value) {
  if (std::isfinite(value)) return value;
  return shortest(value);
}

Json make_report(const std::string& command, const RunConfig& config, Json results,
                 const std::vector<std::string>& warnings) {
  Json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = command;
  report["config"] = echo_config(config);
  report["results"] = std::move(results);
  report["warnings"] = warnings;
  return report;
}

Json to_json(const FeasibilityReport& report) {
  Json j;
  j["photon_number"] = report.photon_number;
  j["verdict"] = to_string(report.verdict());
  Json conditions = Json::array();
  for (const auto& c : report.conditions) {
    Json item;
    item["name"] = c.name;
    item["status"] = to_string(c.status);
    item["satisfied"] = c.satisfied;
    item["margin"] = number(c.margin);
    item["threshold"] = number(c.threshold);
    item["quantity_label"] = c.quantity_label;
    item["quantity"] = number(c.quantity);
    item["reference_label"] = c.reference_label;
    item["reference"] = number(c.reference);
    if (c.has_upper) {
      item["upper_margin"] = number(c.upper_margin);
      item["upper_threshold"] = number(c.upper_threshold);
    }
    if (!c.note.empty()) item["note"] = c.note;
    conditions.push_back(std::move(item));
  }
  j["conditions"] = std::move(conditions);
  return j;
}

Json to_json(const GateMetrics& m) {
  Json j;
  j["feasible"] = m.feasible;
  if (m.feasible) {
    j["window_start"] = number(m.window.start);
    j["window_end"] = number(m.window.end);
  }
  j["success"] = number(m.success);
  j["yield"] = number(m.yield);
  j["contamination"] = number(m.contamination);
  j["purity"] = number(m.purity);
  j["vacuum_weight"] = number(m.vacuum_weight);
  return j;
}

Json to_json(const ConservationAudit& audit) {
  Json j;
  j["drift"] = number(audit.drift);
  j["raw_deficit"] = number(audit.raw_deficit);
  j["scattered"] = number(audit.scattered);
  return j;
}

}  // namespace fockdelay::cli
