#pragma once

#include <string>
#include <vector>

#include "fockdelay/envelope.hpp"
#include "fockdelay/params.hpp"

namespace fockdelay {

enum class Engine { analytic, spectral, time_domain };

std::string to_string(Engine engine);
Engine engine_from_string(const std::string& name);

struct FockComponent {
  int n = 0;
  Complex amplitude;
  // Empty for n = 0 and for components with zero weight.
  SampledEnvelope envelope;
  double delay = 0.0;  // measured medium-induced delay; 0 when empty
  double norm = 0.0;   // integral |envelope|^2 dt

  bool empty() const noexcept { return envelope.empty(); }
};

// Output state sum_n alpha_n f_n(t) |n> after the medium. All nonempty
// envelopes share one time grid.
struct OutputState {
  Engine engine = Engine::analytic;
  SampledEnvelope input;
  double vacuum_transit = 0.0;
  std::vector<FockComponent> components;  // index == n, 0..n_max

  const FockComponent& component(int n) const;
  double vacuum_weight() const;
};

// One Fock sector through the medium with the chosen engine. The analytic
// engine shifts scenario.pulse by tau_n + L/c. Output is in the lab frame on
// the input grid, except for the time-domain engine, whose grid is stamped
// t0 + L/c.
SampledEnvelope propagate_fock_sector(const Scenario& scenario, int n, const SampledEnvelope& input,
                                      Engine engine);

// Propagates every occupied sector n >= 1 with the chosen engine. Sector
// failures are rethrown as NumericalError tagged with the sector.
OutputState assemble(const ProbePulse& pulse, const Scenario& scenario, Engine engine);
OutputState assemble(const Scenario& scenario, Engine engine);

// |<f_m|f_n>| / (|f_m| |f_n|).
double pairwise_overlap(const OutputState& state, int m, int n);

struct GateWindow {
  double start = 0.0;
  double end = 0.0;
};

// Energy-level model of a time gate placed after the medium.
//   success       fraction of the one-photon component's energy inside the
//                 window (relative to the input energy)
//   yield         |alpha_1|^2 * success
//   contamination sum_{n>=2} |alpha_n|^2 * in-window fraction of component n
//   purity        yield / (yield + contamination); NaN when both vanish
struct GateMetrics {
  GateWindow window;
  bool feasible = true;  // false when optimize_gate found no admissible window
  double success = 0.0;
  double yield = 0.0;
  double contamination = 0.0;
  double purity = 0.0;
  double vacuum_weight = 0.0;
};

GateMetrics gate_metrics(const OutputState& state, const GateWindow& window);

struct GateSearch {
  double min_success = 0.9;
  int start_points = 256;
  int width_points = 256;

  bool operator==(const GateSearch&) const = default;
};

// Grid scan over window start and width across the span where the
// components carry energy. Returns the highest-purity window with
// success >= min_success; ties go to the earliest, then narrowest window.
// feasible == false when no window qualifies.
GateMetrics optimize_gate(const OutputState& state, const GateSearch& search = {});

}  // namespace fockdelay
