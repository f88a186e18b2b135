#include "fockdelay/fock.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <future>
#include <limits>

#include "fft.hpp"
#include "fockdelay/analytic.hpp"
#include "fockdelay/errors.hpp"
#include "fockdelay/spectral.hpp"
#include "fockdelay/time_domain.hpp"

namespace fockdelay {

std::string to_string(Engine engine) {
  switch (engine) {
    case Engine::analytic: return "analytic";
    case Engine::spectral: return "spectral";
    case Engine::time_domain: return "time-domain";
  }
  return "unknown";
}

Engine engine_from_string(const std::string& name) {
  if (name == "analytic") return Engine::analytic;
  if (name == "spectral") return Engine::spectral;
  if (name == "time-domain" || name == "time_domain" || name == "td") return Engine::time_domain;
  throw ValidationError("engine", "unknown engine '" + name + "' (analytic, spectral, time-domain)");
}

const FockComponent& OutputState::component(int n) const {
  if (n < 0 || n >= static_cast<int>(components.size()))
    throw ValidationError("n", "no component " + std::to_string(n));
  return components[static_cast<std::size_t>(n)];
}

double OutputState::vacuum_weight() const {
  return components.empty() ? 0.0 : std::norm(components.front().amplitude);
}

namespace {

// Rigid shift of the input by `shift` seconds on the input grid.
SampledEnvelope shifted(const ProbePulse& pulse, const SampledEnvelope& input, double shift) {
  const auto [start, end] = input.support(1e-10);
  (void)start;
  if (end + shift > input.t_end())
    throw NumericalError("padding-overflow", "shifted pulse leaves the time window");
  std::vector<Complex> out(input.size());
  if (pulse.custom_samples()) {
    std::vector<Complex> data(input.samples().begin(), input.samples().end());
    detail::fft_forward(data);
    for (std::size_t k = 0; k < data.size(); ++k)
      data[k] *= std::exp(Complex(0.0, -detail::bin_frequency(k, data.size(), input.dt()) * shift));
    detail::fft_inverse(data);
    out = std::move(data);
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = pulse.envelope(input.time(i) - shift);
  }
  return SampledEnvelope(input.t0(), input.dt(), std::move(out));
}

}  // namespace

SampledEnvelope propagate_fock_sector(const Scenario& scenario, int n, const SampledEnvelope& input,
                                      Engine engine) {
  const ProbePulse& pulse = scenario.pulse;
  switch (engine) {
    case Engine::analytic:
      return shifted(pulse, input,
                     transit_delay(n, scenario.medium, scenario.cavity) +
                         scenario.medium.length / scenario.medium.c);
    case Engine::spectral:
      return propagate(input, TransferSpec::for_sector(n, scenario.medium, scenario.cavity));
    case Engine::time_domain: {
      SolveOptions options;
      options.sector = n;
      options.snapshot_count = 1;
      return solve(scenario, input, options).output;
    }
  }
  throw ValidationError("engine", "unsupported engine");
}

namespace {

// Trapezoid cumulative energy of |f|^2 with exact integration of the
// piecewise-linear power inside a cell.
class CumulativeEnergy {
 public:
  CumulativeEnergy() = default;
  explicit CumulativeEnergy(const SampledEnvelope& f) : t0_(f.t0()), dt_(f.dt()) {
    power_.resize(f.size());
    cumulative_.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) power_[i] = std::norm(f[i]);
    for (std::size_t i = 1; i < f.size(); ++i)
      cumulative_[i] = cumulative_[i - 1] + 0.5 * dt_ * (power_[i - 1] + power_[i]);
  }

  bool empty() const { return power_.empty(); }
  double total() const { return empty() ? 0.0 : cumulative_.back(); }

  double at(double t) const {
    if (empty()) return 0.0;
    const double x = (t - t0_) / dt_;
    if (x <= 0.0) return 0.0;
    const double last = static_cast<double>(power_.size() - 1);
    if (x >= last) return cumulative_.back();
    const auto i = static_cast<std::size_t>(x);
    const double f = x - static_cast<double>(i);
    const double p0 = power_[i];
    const double p1 = power_[i + 1];
    return cumulative_[i] + dt_ * (p0 * f + 0.5 * (p1 - p0) * f * f);
  }

  double between(double a, double b) const { return at(b) - at(a); }

 private:
  double t0_ = 0.0;
  double dt_ = 1.0;
  std::vector<double> power_;
  std::vector<double> cumulative_;
};

struct GateContext {
  std::vector<CumulativeEnergy> energy;  // index == n
  std::vector<double> weight;
  double input_energy = 0.0;
  double vacuum_weight = 0.0;
  double t_first = 0.0;
  double t_last = 0.0;

  explicit GateContext(const OutputState& state) {
    input_energy = CumulativeEnergy(state.input).total();
    if (!(input_energy > 0.0)) throw NumericalError("zero-norm", "input envelope carries no energy");
    vacuum_weight = state.vacuum_weight();
    bool have_grid = false;
    for (const auto& c : state.components) {
      weight.push_back(std::norm(c.amplitude));
      if (c.n >= 1 && !c.empty()) {
        energy.emplace_back(c.envelope);
        if (!have_grid) {
          t_first = c.envelope.t0();
          t_last = c.envelope.time(c.envelope.size() - 1);
          have_grid = true;
        }
      } else {
        energy.emplace_back();
      }
    }
    if (!have_grid) throw ValidationError("state", "no propagated components");
  }

  GateMetrics evaluate(double start, double end) const {
    GateMetrics m;
    m.window = {start, end};
    m.vacuum_weight = vacuum_weight;
    if (energy.size() > 1) m.success = energy[1].between(start, end) / input_energy;
    m.yield = weight.size() > 1 ? weight[1] * m.success : 0.0;
    for (std::size_t n = 2; n < energy.size(); ++n)
      m.contamination += weight[n] * energy[n].between(start, end) / input_energy;
    const double total = m.yield + m.contamination;
    m.purity = total > 0.0 ? m.yield / total : std::numeric_limits<double>::quiet_NaN();
    return m;
  }
};

}  // namespace

OutputState assemble(const ProbePulse& pulse, const Scenario& scenario, Engine engine) {
  Scenario local = scenario;
  local.pulse = pulse;
  local.validate();
  const SampledEnvelope input = sample_envelope(local);

  OutputState state;
  state.engine = engine;
  state.input = input;
  state.vacuum_transit = local.medium.length / local.medium.c;
  state.components.resize(static_cast<std::size_t>(pulse.n_max()) + 1);
  for (int n = 0; n <= pulse.n_max(); ++n) {
    state.components[static_cast<std::size_t>(n)].n = n;
    state.components[static_cast<std::size_t>(n)].amplitude = pulse.amplitude(n);
  }

  std::vector<std::pair<int, std::future<SampledEnvelope>>> jobs;
  for (int n = 1; n <= pulse.n_max(); ++n) {
    if (pulse.weight(n) == 0.0) continue;
    const auto policy = engine == Engine::analytic ? std::launch::deferred : std::launch::async;
    jobs.emplace_back(n, std::async(policy, [n, &local, &input, engine] {
                        return propagate_fock_sector(local, n, input, engine);
                      }));
  }
  // Collect every job before rethrowing so no thread outlives `local`.
  std::exception_ptr failure;
  int failed_sector = -1;
  for (auto& [n, job] : jobs) {
    try {
      auto& c = state.components[static_cast<std::size_t>(n)];
      c.envelope = job.get();
      c.norm = c.envelope.energy();
      c.delay = measure_delay(input, c.envelope, state.vacuum_transit);
    } catch (...) {
      if (!failure) {
        failure = std::current_exception();
        failed_sector = n;
      }
    }
  }
  if (failure) {
    const std::string tag = "sector " + std::to_string(failed_sector) + ": ";
    try {
      std::rethrow_exception(failure);
    } catch (const NumericalError& e) {
      throw NumericalError(e.kind(), tag + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(e.field(), tag + e.what());
    }
  }
  return state;
}

OutputState assemble(const Scenario& scenario, Engine engine) {
  return assemble(scenario.pulse, scenario, engine);
}

double pairwise_overlap(const OutputState& state, int m, int n) {
  const auto& a = state.component(m);
  const auto& b = state.component(n);
  if (a.empty() || b.empty())
    throw ValidationError("component", "overlap needs two propagated components");
  if (a.envelope.size() != b.envelope.size() || a.envelope.t0() != b.envelope.t0() ||
      a.envelope.dt() != b.envelope.dt())
    throw ValidationError("component", "components are on different grids");
  Complex inner;
  for (std::size_t i = 0; i < a.envelope.size(); ++i) inner += std::conj(a.envelope[i]) * b.envelope[i];
  const double norms = std::sqrt(a.envelope.energy() * b.envelope.energy());
  if (!(norms > 0.0)) throw NumericalError("zero-norm", "component carries no energy");
  return std::abs(inner) * a.envelope.dt() / norms;
}

GateMetrics gate_metrics(const OutputState& state, const GateWindow& window) {
  const GateContext context(state);
  if (!(window.end > window.start)) throw ValidationError("window", "end must exceed start");
  if (window.start < context.t_first || window.end > context.t_last)
    throw ValidationError("window", "window lies outside the time grid");
  return context.evaluate(window.start, window.end);
}

GateMetrics optimize_gate(const OutputState& state, const GateSearch& search) {
  if (!(search.min_success > 0.0 && search.min_success <= 1.0))
    throw ValidationError("min_success", "must lie in (0, 1]");
  if (search.start_points < 2 || search.width_points < 1)
    throw ValidationError("gate", "need at least 2 start points and 1 width point");
  const GateContext context(state);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& c : state.components) {
    if (c.n < 1 || c.empty() || !(c.envelope.energy() > 0.0)) continue;
    const auto [a, b] = c.envelope.support(1e-8);
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  GateMetrics best;
  best.feasible = false;
  best.purity = std::numeric_limits<double>::quiet_NaN();
  best.vacuum_weight = context.vacuum_weight;
  if (!(hi > lo)) return best;
  lo = std::max(lo, context.t_first);
  hi = std::min(hi, context.t_last);

  const double span = hi - lo;
  const double start_step = span / (search.start_points - 1);
  for (int i = 0; i < search.start_points; ++i) {
    const double start = lo + start_step * i;
    for (int j = 1; j <= search.width_points; ++j) {
      const double end = std::min(start + span * j / search.width_points, context.t_last);
      if (!(end > start)) continue;
      const GateMetrics m = context.evaluate(start, end);
      if (m.success < search.min_success) continue;
      if (!best.feasible || m.purity > best.purity) {
        best = m;
        best.feasible = true;
      }
    }
  }
  return best;
}

}  // namespace fockdelay
