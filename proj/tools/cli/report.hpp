#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fockdelay/analytic.hpp"
#include "fockdelay/config.hpp"
#include "fockdelay/fock.hpp"
#include "fockdelay/time_domain.hpp"

namespace fockdelay::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Finite doubles as numbers; inf, -inf and nan as strings.
Json number(double value);

// {schema_version, command, config, results, warnings}
Json make_report(const std::string& command, const RunConfig& config, Json results,
                 const std::vector<std::string>& warnings);

Json to_json(const FeasibilityReport& report);
Json to_json(const GateMetrics& metrics);
Json to_json(const ConservationAudit& audit);

}  // namespace fockdelay::cli
