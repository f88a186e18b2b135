#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "fockdelay/fock.hpp"
#include "fockdelay/params.hpp"

namespace fockdelay {

enum class SweepParameter { G, OD, T, kappa, n_max, Gamma };
enum class Spacing { linear, log };

std::string to_string(SweepParameter parameter);
SweepParameter sweep_parameter_from_string(const std::string& name);
std::string to_string(Spacing spacing);
Spacing spacing_from_string(const std::string& name);

struct SweepAxis {
  SweepParameter parameter = SweepParameter::OD;
  double min = 0.0;
  double max = 0.0;
  int count = 2;
  Spacing spacing = Spacing::linear;

  // Grid values; the end points are exact.
  std::vector<double> values() const;
  bool operator==(const SweepAxis&) const = default;
};

// Metric groups a sweep can evaluate. Feasibility is always included.
//   delays       tau_n, delta tau_m and delta tau_1 / T
//   feasibility  per-condition margin and status plus the verdict
//   propagation  measured delay and transmission of the one-photon sector
//   gate         optimal time gate of the assembled output state
inline const std::vector<std::string>& sweep_metric_names() {
  static const std::vector<std::string> names = {"delays", "feasibility", "propagation", "gate"};
  return names;
}

struct SweepPlan {
  std::vector<SweepAxis> axes;
  Engine engine = Engine::analytic;
  std::vector<std::string> metrics = {"delays", "feasibility"};
  GateSearch gate;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
  std::size_t point_count() const;
  bool operator==(const SweepPlan&) const = default;
};

// Largest grid accepted for an engine.
std::size_t sweep_point_cap(Engine engine);

using SweepCell = std::variant<double, std::string>;

struct SweepRow {
  std::vector<double> coordinates;  // one per axis
  std::vector<SweepCell> cells;     // one per SweepTable::columns entry
  std::string error;                // empty when the point evaluated
};

struct SweepTable {
  std::vector<std::string> axis_names;
  std::vector<std::string> columns;
  std::vector<SweepRow> rows;  // lexicographic grid order, first axis slowest
};

// The scenario for one grid point. OD and Gamma are applied at fixed
// optical depth and fixed decay respectively, i.e. g is back-solved.
Scenario apply_point(const Scenario& base, const std::vector<SweepAxis>& axes,
                     const std::vector<double>& coordinates);

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;

// Evaluates every grid point. Per-point failures land in SweepRow::error and
// never abort the sweep. Output is independent of the thread count.
SweepTable run_sweep(const Scenario& base, const SweepPlan& plan,
                     const SweepProgress& progress = {});

void write_sweep_csv(std::ostream& out, const SweepTable& table);
void write_sweep_jsonl(std::ostream& out, const SweepTable& table);

}  // namespace fockdelay
