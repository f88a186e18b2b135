#include "fockdelay/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "fockdelay/analytic.hpp"
#include "fockdelay/errors.hpp"
#include "fockdelay/format.hpp"
#include "fockdelay/spectral.hpp"

namespace fockdelay {

std::string to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::G: return "G";
    case SweepParameter::OD: return "OD";
    case SweepParameter::T: return "T";
    case SweepParameter::kappa: return "kappa";
    case SweepParameter::n_max: return "n_max";
    case SweepParameter::Gamma: return "Gamma";
  }
  return "unknown";
}

SweepParameter sweep_parameter_from_string(const std::string& name) {
  for (auto p : {SweepParameter::G, SweepParameter::OD, SweepParameter::T, SweepParameter::kappa,
                 SweepParameter::n_max, SweepParameter::Gamma})
    if (to_string(p) == name) return p;
  throw ValidationError("sweep.axis", "unknown parameter '" + name +
                                          "' (G, OD, T, kappa, n_max, Gamma)");
}

std::string to_string(Spacing spacing) { return spacing == Spacing::log ? "log" : "linear"; }

Spacing spacing_from_string(const std::string& name) {
  if (name == "linear" || name == "lin") return Spacing::linear;
  if (name == "log") return Spacing::log;
  throw ValidationError("sweep.axis", "unknown spacing '" + name + "' (linear, log)");
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const double f = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
    if (spacing == Spacing::log)
      v[static_cast<std::size_t>(i)] = min * std::pow(max / min, f);
    else
      v[static_cast<std::size_t>(i)] = min + f * (max - min);
  }
  if (!v.empty()) {
    v.front() = min;
    v.back() = max;
  }
  return v;
}

std::size_t sweep_point_cap(Engine engine) {
  switch (engine) {
    case Engine::analytic: return 1000000;
    case Engine::spectral: return 1000;
    case Engine::time_domain: return 100;
  }
  return 0;
}

std::size_t SweepPlan::point_count() const {
  std::size_t total = axes.empty() ? 0 : 1;
  for (const auto& axis : axes) total *= static_cast<std::size_t>(std::max(axis.count, 0));
  return total;
}

void SweepPlan::validate() const {
  if (axes.empty() || axes.size() > 3) throw ValidationError("sweep.axes", "need 1 to 3 axes");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const auto& a = axes[i];
    const std::string field = "sweep.axis." + to_string(a.parameter);
    for (std::size_t j = 0; j < i; ++j)
      if (axes[j].parameter == a.parameter) throw ValidationError(field, "axis listed twice");
    if (a.count < 2) throw ValidationError(field, "count must be >= 2");
    if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.min < a.max))
      throw ValidationError(field, "need finite min < max");
    if (a.spacing == Spacing::log && !(a.min > 0.0))
      throw ValidationError(field, "log spacing needs min > 0");
    if (a.parameter != SweepParameter::kappa && !(a.min > 0.0))
      throw ValidationError(field, "values must be positive");
    if (a.parameter == SweepParameter::kappa && a.min < 0.0)
      throw ValidationError(field, "values must be >= 0");
    if (a.parameter == SweepParameter::n_max && a.min < 1.0)
      throw ValidationError(field, "n_max must be >= 1");
  }
  for (const auto& m : metrics)
    if (std::find(sweep_metric_names().begin(), sweep_metric_names().end(), m) ==
        sweep_metric_names().end())
      throw ValidationError("sweep.metrics", "unknown metric '" + m + "'");
  if (threads < 0) throw ValidationError("sweep.threads", "must be >= 0");
  // Guard the product against overflow before comparing with the cap.
  double product = 1.0;
  for (const auto& a : axes) product *= a.count;
  const auto cap = sweep_point_cap(engine);
  if (product > static_cast<double>(cap))
    throw ValidationError("sweep.axes", "grid of " + shortest(product) + " points exceeds the " +
                                            to_string(engine) + " cap of " + std::to_string(cap));
}

Scenario apply_point(const Scenario& base, const std::vector<SweepAxis>& axes,
                     const std::vector<double>& coordinates) {
  Scenario s = base;
  double od = derive(base.medium).optical_depth;
  double gamma = base.medium.gamma;
  bool rebuild_medium = false;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const double v = coordinates.at(i);
    switch (axes[i].parameter) {
      case SweepParameter::G: s.cavity.G = v; break;
      case SweepParameter::kappa: s.cavity.kappa = v; break;
      case SweepParameter::T: s.pulse = s.pulse.with_duration(v); break;
      case SweepParameter::n_max:
        s.pulse = s.pulse.with_n_max(static_cast<int>(std::llround(v)));
        break;
      case SweepParameter::OD:
        od = v;
        rebuild_medium = true;
        break;
      case SweepParameter::Gamma:
        gamma = v;
        rebuild_medium = true;
        break;
    }
  }
  if (rebuild_medium) {
    const auto& m = base.medium;
    s.medium = from_macroscopic(od, gamma, m.length,
                                m.synthetic_atoms ? std::nullopt : std::optional<double>(m.atoms), m.c);
  }
  return s;
}

namespace {

bool wants(const SweepPlan& plan, const std::string& metric) {
  return std::find(plan.metrics.begin(), plan.metrics.end(), metric) != plan.metrics.end();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int largest_n_max(const Scenario& base, const SweepPlan& plan) {
  int n_max = base.pulse.n_max();
  for (const auto& a : plan.axes)
    if (a.parameter == SweepParameter::n_max) n_max = static_cast<int>(std::llround(a.max));
  return n_max;
}

std::vector<std::string> make_columns(const SweepPlan& plan, int n_max) {
  std::vector<std::string> cols;
  if (wants(plan, "delays")) {
    for (int n = 0; n <= n_max; ++n) cols.push_back("tau_" + std::to_string(n));
    for (int m = 0; m < n_max; ++m) cols.push_back("dtau_" + std::to_string(m));
    cols.push_back("dtau1_over_T");
  }
  for (const auto& name : feasibility_condition_names()) {
    cols.push_back(name + "_margin");
    cols.push_back(name + "_status");
  }
  cols.push_back("separation_upper_margin");
  cols.push_back("verdict");
  if (wants(plan, "propagation")) {
    cols.push_back("delay_1");
    cols.push_back("transmission_1");
  }
  if (wants(plan, "gate")) {
    for (const char* c : {"gate_feasible", "gate_start", "gate_end", "gate_success", "gate_yield",
                          "gate_purity"})
      cols.emplace_back(c);
  }
  return cols;
}

std::vector<SweepCell> evaluate(const Scenario& s, const SweepPlan& plan, int n_max_columns) {
  std::vector<SweepCell> cells;
  s.validate();
  if (wants(plan, "delays")) {
    const int n_max = s.pulse.n_max();
    for (int n = 0; n <= n_max_columns; ++n)
      cells.emplace_back(n <= n_max ? transit_delay(n, s.medium, s.cavity) : kNaN);
    for (int m = 0; m < n_max_columns; ++m)
      cells.emplace_back(m < n_max ? differential_delay(m, s.medium, s.cavity) : kNaN);
    cells.emplace_back(differential_delay(1, s.medium, s.cavity) / s.pulse.duration());
  }
  const FeasibilityReport report = feasibility(s);
  for (const auto& name : feasibility_condition_names()) {
    const auto& c = report.at(name);
    cells.emplace_back(c.margin);
    cells.emplace_back(to_string(c.status));
  }
  cells.emplace_back(report.at("separation").upper_margin);
  cells.emplace_back(to_string(report.verdict()));

  if (wants(plan, "propagation")) {
    if (plan.engine == Engine::analytic) {
      cells.emplace_back(transit_delay(1, s.medium, s.cavity));
      cells.emplace_back(1.0);
    } else {
      const ProbePulse one =
          s.pulse.custom_samples()
              ? ProbePulse(*s.pulse.custom_samples(), s.pulse.duration(), {0.0, 1.0})
              : ProbePulse(s.pulse.shape(), s.pulse.duration(), {0.0, 1.0});
      const OutputState state = assemble(one, s, plan.engine);
      const auto& c = state.component(1);
      cells.emplace_back(c.delay);
      cells.emplace_back(measure_transmission(state.input, c.envelope));
    }
  }
  if (wants(plan, "gate")) {
    const OutputState state = assemble(s, plan.engine);
    const GateMetrics g = optimize_gate(state, plan.gate);
    cells.emplace_back(std::string(g.feasible ? "true" : "false"));
    cells.emplace_back(g.feasible ? g.window.start : kNaN);
    cells.emplace_back(g.feasible ? g.window.end : kNaN);
    cells.emplace_back(g.feasible ? g.success : kNaN);
    cells.emplace_back(g.feasible ? g.yield : kNaN);
    cells.emplace_back(g.feasible ? g.purity : kNaN);
  }
  return cells;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

std::string cell_text(const SweepCell& cell) {
  if (const double* v = std::get_if<double>(&cell)) return std::isnan(*v) ? "" : shortest(*v);
  return std::get<std::string>(cell);
}

}  // namespace

SweepTable run_sweep(const Scenario& base, const SweepPlan& plan, const SweepProgress& progress) {
  plan.validate();
  base.validate();
  const int n_max_columns = largest_n_max(base, plan);

  SweepTable table;
  for (const auto& a : plan.axes) table.axis_names.push_back(to_string(a.parameter));
  table.columns = make_columns(plan, n_max_columns);

  std::vector<std::vector<double>> grids;
  for (const auto& a : plan.axes) grids.push_back(a.values());
  const std::size_t total = plan.point_count();
  table.rows.resize(total);
  for (std::size_t index = 0; index < total; ++index) {
    auto& coords = table.rows[index].coordinates;
    coords.resize(grids.size());
    std::size_t rest = index;
    for (std::size_t a = grids.size(); a-- > 0;) {
      coords[a] = grids[a][rest % grids[a].size()];
      rest /= grids[a].size();
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t index = next++; index < total; index = next++) {
      SweepRow& row = table.rows[index];
      try {
        const Scenario s = apply_point(base, plan.axes, row.coordinates);
        row.cells = evaluate(s, plan, n_max_columns);
      } catch (const std::exception& e) {
        row.error = e.what();
        row.cells.assign(table.columns.size(), SweepCell(kNaN));
      }
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, total);
      }
    }
  };

  unsigned threads = plan.threads > 0 ? static_cast<unsigned>(plan.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return table;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  bool first = true;
  auto sep = [&] {
    if (!first) out << ',';
    first = false;
  };
  for (const auto& a : table.axis_names) {
    sep();
    out << csv_field(a);
  }
  for (const auto& c : table.columns) {
    sep();
    out << csv_field(c);
  }
  sep();
  out << "error\n";
  for (const auto& row : table.rows) {
    first = true;
    for (double v : row.coordinates) {
      sep();
      out << shortest(v);
    }
    for (const auto& cell : row.cells) {
      sep();
      out << csv_field(cell_text(cell));
    }
    sep();
    out << csv_field(row.error) << '\n';
  }
}

void write_sweep_jsonl(std::ostream& out, const SweepTable& table) {
  for (const auto& row : table.rows) {
    nlohmann::ordered_json j;
    for (std::size_t a = 0; a < table.axis_names.size(); ++a)
      j[table.axis_names[a]] = row.coordinates[a];
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const auto& cell = row.cells[c];
      if (const double* v = std::get_if<double>(&cell)) {
        if (std::isnan(*v)) {
          j[table.columns[c]] = nullptr;
        } else if (std::isinf(*v)) {
          j[table.columns[c]] = *v > 0 ? "inf" : "-inf";
        } else {
          j[table.columns[c]] = *v;
        }
      } else {
        j[table.columns[c]] = std::get<std::string>(cell);
      }
    }
    if (!row.error.empty()) j["error"] = row.error;
    out << j.dump() << '\n';
  }
}

}  // namespace fockdelay
