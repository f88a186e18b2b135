#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fockdelay/errors.hpp"
#include "fockdelay/fock.hpp"
#include "fockdelay/params.hpp"
#include "fockdelay/sweep.hpp"
#include "fockdelay/time_domain.hpp"

namespace fockdelay {

// Run configuration in a small INI dialect:
//
//   preset = demo-feasible        # optional, must precede any section
//   [medium]
//   OD = 400                      # or: g = 1.2 krad/s together with N
//   N = 1e6                       # or: N = synthetic
//   L = 1 cm
//   Gamma = 3 MHz
//   [cavity]
//   G = 10 MHz
//   kappa = 10 kHz
//   [pulse]
//   shape = gaussian              # gaussian | sech | custom (needs samples = file.csv)
//   T = 1 us
//   amplitudes = 0, 0.7071067811865476, 0.7071067811865476
//
// Dimensional values must carry a unit. Rates accept rad/s, krad/s, Mrad/s,
// Grad/s, and Hz, kHz, MHz, GHz, whose meaning follows
// numerics.rate_convention (angular: 1 MHz = 1e6 rad/s; cyclic: 2 pi 1e6).
// Sections: medium, cavity, pulse, numerics, thresholds, gate, sweep, run.

struct ConfigIssue {
  int line = 0;  // 0 when the problem is not tied to one line
  std::string message;
};

class ConfigError : public ValidationError {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

struct RunSection {
  Engine engine = Engine::spectral;
  int sector = 1;
  SolveMode mode = SolveMode::fixed_sector;

  bool operator==(const RunSection&) const = default;
};

struct RunConfig {
  std::string preset;  // empty when none was used
  Scenario scenario;
  GateSearch gate;
  SweepPlan sweep;  // axes empty when the config has no sweep section
  RunSection run;
  std::string samples_path;  // custom envelope file, as resolved

  bool operator==(const RunConfig&) const = default;
};

const std::vector<std::string>& preset_names();
RunConfig preset(const std::string& name);
std::string preset_summary(const std::string& name);

// Collects every problem before throwing ConfigError. Relative sample paths
// are resolved against base_dir.
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

// Fully resolved config text in SI units; parsing it gives back an equal
// RunConfig.
std::string echo_config(const RunConfig& config);

// "OD:log:10:1000:16" with SI values; used by the command line.
SweepAxis parse_axis_spec(const std::string& spec);

}  // namespace fockdelay
