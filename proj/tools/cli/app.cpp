#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "fockdelay/analytic.hpp"
#include "fockdelay/config.hpp"
#include "fockdelay/errors.hpp"
#include "fockdelay/fock.hpp"
#include "fockdelay/format.hpp"
#include "fockdelay/io.hpp"
#include "fockdelay/spectral.hpp"
#include "fockdelay/sweep.hpp"
#include "fockdelay/time_domain.hpp"
#include "report.hpp"

namespace fockdelay::cli {
namespace {

namespace fs = std::filesystem;

struct Common {
  std::string preset;
  std::string config;
  std::optional<int> n_max;
  std::optional<std::string> out;
  bool json = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--preset", c.preset, "Named parameter set (see `fockdelay presets`)");
  sub->add_option("--config", c.config, "Config file")->check(CLI::ExistingFile);
  sub->add_option("--n-max", c.n_max, "Largest Fock number carried by the probe")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "Output directory (default: $FOCKDELAY_OUT)");
  sub->add_flag("--json", c.json, "Print the JSON report instead of a table");
}

RunConfig load(const Common& c) {
  RunConfig config;
  if (!c.config.empty()) {
    config = load_config(c.config);
    if (!c.preset.empty() && c.preset != config.preset)
      throw ValidationError("preset", "--preset conflicts with the config file; put it in the file");
  } else if (!c.preset.empty()) {
    config = preset(c.preset);
  } else {
    throw ValidationError("config", "pass --preset NAME or --config FILE");
  }
  if (c.n_max) config.scenario.pulse = config.scenario.pulse.with_n_max(*c.n_max);
  return config;
}

class Output {
 public:
  Output(const Common& common, std::ostream& out) : json_(common.json), out_(out) {
    dir_ = resolve_output_dir(common.out);
  }

  bool json() const { return json_; }
  const std::optional<fs::path>& dir() const { return dir_; }

  void file(const std::string& name, const std::string& content) {
    if (!dir_) return;
    write_file_atomic(*dir_ / name, content);
    written_.push_back((*dir_ / name).string());
  }

  void finish(const std::string& command, const RunConfig& config, Json results,
              const std::vector<std::string>& warnings, const TextTable& table) {
    if (dir_) {
      Json files = Json::array();
      for (const auto& f : written_) files.push_back(f);
      files.push_back((*dir_ / (command + ".json")).string());
      results["files"] = files;
    }
    const Json report = make_report(command, config, std::move(results), warnings);
    if (dir_) write_file_atomic(*dir_ / (command + ".json"), report.dump(2) + "\n");
    if (json_) {
      out_ << report.dump(2) << '\n';
      return;
    }
    table.render(out_);
    for (const auto& w : warnings) out_ << "warning: " << w << '\n';
    if (dir_) out_ << "outputs written to " << dir_->string() << '\n';
  }

 private:
  bool json_;
  std::ostream& out_;
  std::optional<fs::path> dir_;
  std::vector<std::string> written_;
};

std::string csv(const SampledEnvelope& envelope) {
  std::ostringstream s;
  write_csv(s, envelope);
  return s.str();
}

std::vector<std::string> feasibility_warnings(const FeasibilityReport& report) {
  std::vector<std::string> warnings;
  for (const auto& c : report.conditions) {
    if (c.status == GateStatus::marginal || c.status == GateStatus::violated)
      warnings.push_back(c.name + " is " + to_string(c.status) + " (margin " + shortest(c.margin) +
                         ", threshold " + shortest(c.threshold) + ")");
    if (!c.note.empty()) warnings.push_back(c.name + ": " + c.note);
  }
  return warnings;
}

std::string scenario_title(const Scenario& s) {
  std::ostringstream t;
  t << "OD " << std::llround(derive(s.medium).optical_depth * 1000.0) / 1000.0 << ", Gamma "
    << with_si_prefix(s.medium.gamma, "rad/s", 4) << ", G " << with_si_prefix(s.cavity.G, "rad/s", 4)
    << ", T " << with_si_prefix(s.pulse.duration(), "s", 4);
  return t.str();
}

// ---------------------------------------------------------------- delay

int cmd_delay(const Common& common, std::ostream& out) {
  const RunConfig config = load(common);
  const Scenario& s = config.scenario;
  s.validate();
  Output output(common, out);
  const int n_max = s.pulse.n_max();
  Warnings warnings;

  Json tau = Json::array(), dtau = Json::array(), velocity = Json::array(),
       simplified = Json::array(), windows = Json::array();
  TextTable table("Transit delays (" + scenario_title(s) + ")");
  for (int n = 0; n <= n_max; ++n) {
    const double t = transit_delay(n, s.medium, s.cavity);
    tau.push_back(number(t));
    velocity.push_back(number(group_velocity(n, s.medium, s.cavity)));
    simplified.push_back(number(group_velocity_simplified(n, s.medium, s.cavity, &warnings)));
    const auto w = transparency_window(n, s.medium, s.cavity);
    windows.push_back({{"n", n},
                       {"uncorrected", number(w.uncorrected_form)},
                       {"corrected", number(w.corrected_form)}});
    table.add("tau_" + std::to_string(n), with_si_prefix(t, "s"));
  }
  table.add_rule();
  for (int m = 0; m < n_max; ++m) {
    const double d = differential_delay(m, s.medium, s.cavity);
    dtau.push_back(number(d));
    table.add("dtau_" + std::to_string(m), with_si_prefix(d, "s"));
  }
  const double ratio = differential_delay(1, s.medium, s.cavity) / s.pulse.duration();
  table.add("dtau_1 / T", with_si_prefix(ratio, "", 6));
  table.add_rule();
  for (int n = 0; n <= n_max; ++n)
    table.add("v_gr(" + std::to_string(n) + ")",
              with_si_prefix(group_velocity(n, s.medium, s.cavity), "m/s"));

  const DerivedMedium d = derive(s.medium);
  Json results;
  results["n_max"] = n_max;
  results["tau"] = tau;
  results["dtau"] = dtau;
  results["dtau1_over_T"] = number(ratio);
  results["group_velocity"] = velocity;
  results["group_velocity_simplified"] = simplified;
  results["transparency_window"] = windows;
  results["derived"] = {{"absorption_length", number(d.absorption_length)},
                        {"optical_depth", number(d.optical_depth)},
                        {"gsq_n", number(d.gsq_n)}};
  // Each simplified-velocity call may warn; keep one copy of each message.
  std::sort(warnings.begin(), warnings.end());
  warnings.erase(std::unique(warnings.begin(), warnings.end()), warnings.end());
  output.finish("delay", config, std::move(results), warnings, table);
  return kExitOk;
}

// ---------------------------------------------------------------- feasibility

int cmd_feasibility(const Common& common, std::ostream& out) {
  const RunConfig config = load(common);
  Output output(common, out);
  const FeasibilityReport report = feasibility(config.scenario);
  TextTable table("Feasibility at n_p = " + std::to_string(report.photon_number) + " (" +
                  scenario_title(config.scenario) + ")");
  for (const auto& c : report.conditions) {
    std::string value = to_string(c.status) + "  margin " + with_si_prefix(c.margin, "", 4) +
                        " (threshold " + shortest(c.threshold) + ")";
    if (c.has_upper)
      value += ", upper margin " + with_si_prefix(c.upper_margin, "", 4) + " (threshold " +
               shortest(c.upper_threshold) + ")";
    table.add(c.name, value);
  }
  table.add_rule();
  table.add("verdict", to_string(report.verdict()));
  output.finish("feasibility", config, to_json(report), feasibility_warnings(report), table);
  return kExitOk;
}

// ---------------------------------------------------------------- propagate

struct SectorOptions {
  std::optional<int> sector;
  std::optional<std::string> engine;
};

int cmd_propagate(const Common& common, const SectorOptions& opt, std::ostream& out) {
  const RunConfig config = load(common);
  const Scenario& s = config.scenario;
  s.validate();
  Output output(common, out);
  const int n = opt.sector.value_or(config.run.sector);
  const Engine engine = opt.engine ? engine_from_string(*opt.engine) : config.run.engine;
  if (n < 0) throw ValidationError("sector", "must be >= 0");

  const SampledEnvelope input = sample_envelope(s);
  const SampledEnvelope result = propagate_fock_sector(s, n, input, engine);
  const double vacuum = s.medium.length / s.medium.c;
  const double delay = measure_delay(input, result, vacuum);
  const double expected = transit_delay(n, s.medium, s.cavity);
  const double transmission = measure_transmission(input, result);

  output.file("input.csv", csv(input));
  output.file("output.csv", csv(result));

  TextTable table("Sector n = " + std::to_string(n) + ", " + to_string(engine) + " engine (" +
                  scenario_title(s) + ")");
  table.add("measured delay", with_si_prefix(delay, "s"));
  table.add("analytic tau_n", with_si_prefix(expected, "s"));
  table.add("relative difference", with_si_prefix((delay - expected) / expected, "", 4));
  table.add("transmission", with_si_prefix(transmission, "", 8));
  table.add("vacuum transit", with_si_prefix(vacuum, "s"));
  table.add("grid", std::to_string(input.size()) + " samples, dt " +
                        with_si_prefix(input.dt(), "s", 4));

  Json results;
  results["sector"] = n;
  results["engine"] = to_string(engine);
  results["delay"] = number(delay);
  results["expected_delay"] = number(expected);
  results["transmission"] = number(transmission);
  results["vacuum_transit"] = number(vacuum);
  results["samples"] = input.size();
  results["dt"] = number(input.dt());
  output.finish("propagate", config, std::move(results), {}, table);
  return kExitOk;
}

// ---------------------------------------------------------------- solve-td

struct SolveCliOptions {
  std::optional<int> sector;
  std::optional<std::string> mode;
  std::optional<int> z_points;
};

int cmd_solve(const Common& common, const SolveCliOptions& opt, std::ostream& out) {
  RunConfig config = load(common);
  if (opt.z_points) config.scenario.numerics.z_points = *opt.z_points;
  const Scenario& s = config.scenario;
  s.validate();
  Output output(common, out);

  SolveOptions options;
  options.mode = config.run.mode;
  if (opt.mode) {
    if (*opt.mode == "fixed") options.mode = SolveMode::fixed_sector;
    else if (*opt.mode == "dynamic") options.mode = SolveMode::dynamic_filling;
    else throw ValidationError("mode", "must be fixed or dynamic");
  }
  options.sector = opt.sector.value_or(config.run.sector);
  const TimeDomainResult r = solve(s, options);
  const ConservationAudit audit = conservation_audit(r);
  const double delay = measure_delay(r.input, r.output, r.vacuum_transit);
  const double transmission = measure_transmission(r.input, r.output);
  const auto occupation = cavity_occupation_trace(r);
  const double peak = *std::max_element(occupation.begin(), occupation.end());

  std::ostringstream trace;
  trace << "t_seconds,n_cav,spin,excited,net_flux,scattered\n";
  for (std::size_t k = 0; k < occupation.size(); ++k)
    trace << shortest(r.time(k)) << ',' << shortest(occupation[k]) << ',' << shortest(r.spin[k])
          << ',' << shortest(r.excited[k]) << ',' << shortest(r.net_flux[k]) << ','
          << shortest(r.scattered[k]) << '\n';
  output.file("occupation.csv", trace.str());
  output.file("output.csv", csv(r.output));
  std::ostringstream snaps;
  snaps << "snapshot,t_seconds,n_cav,";
  for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
    std::ostringstream one;
    write_snapshot_csv(one, r.snapshots[i]);
    std::istringstream lines(one.str());
    std::string line;
    bool header = true;
    while (std::getline(lines, line)) {
      if (header) {
        if (i == 0) snaps << line << '\n';
        header = false;
        continue;
      }
      snaps << i << ',' << shortest(r.snapshots[i].t) << ',' << shortest(r.snapshots[i].n_cav)
            << ',' << line << '\n';
    }
  }
  if (!r.snapshots.empty()) output.file("snapshots.csv", snaps.str());

  const bool dynamic = options.mode == SolveMode::dynamic_filling;
  const double reference = dynamic ? s.pulse.n_max()
                                   : transit_delay(options.sector, s.medium, s.cavity);
  TextTable table(std::string(dynamic ? "Dynamic filling" : "Fixed sector n = " +
                                                                std::to_string(options.sector)) +
                  " (" + scenario_title(s) + ")");
  table.add("measured delay", with_si_prefix(delay, "s"));
  if (!dynamic) table.add("analytic tau_n", with_si_prefix(reference, "s"));
  table.add("transmission", with_si_prefix(transmission, "", 8));
  table.add("peak occupation", with_si_prefix(peak, "", 6) + " photons");
  table.add("final occupation", with_si_prefix(occupation.back(), "", 6) + " photons");
  table.add("scattered", with_si_prefix(audit.scattered, "", 6) + " photons");
  table.add("conservation drift", with_si_prefix(audit.drift, "", 4) + " photons");
  table.add("z points", std::to_string(s.numerics.z_points));

  Json results;
  results["mode"] = dynamic ? "dynamic" : "fixed";
  if (!dynamic) {
    results["sector"] = options.sector;
    results["expected_delay"] = number(reference);
  }
  results["photons"] = number(r.photons);
  results["delay"] = number(delay);
  results["transmission"] = number(transmission);
  results["peak_occupation"] = number(peak);
  results["final_occupation"] = number(occupation.back());
  results["conservation"] = to_json(audit);
  results["z_points"] = s.numerics.z_points;
  results["time_steps"] = r.input.size();
  output.finish("solve-td", config, std::move(results), {}, table);
  return kExitOk;
}

// ---------------------------------------------------------------- filter

struct FilterOptions {
  std::optional<std::string> engine;
  std::optional<double> s_min;
};

int cmd_filter(const Common& common, const FilterOptions& opt, std::ostream& out) {
  RunConfig config = load(common);
  if (opt.s_min) config.gate.min_success = *opt.s_min;
  const Engine engine = opt.engine ? engine_from_string(*opt.engine) : config.run.engine;
  Output output(common, out);

  const OutputState state = assemble(config.scenario, engine);
  const GateMetrics gate = optimize_gate(state, config.gate);

  TextTable table("Fock components after the medium, " + to_string(engine) + " engine (" +
                  scenario_title(config.scenario) + ")");
  Json components = Json::array();
  std::vector<int> present;
  for (const auto& c : state.components) {
    Json item;
    item["n"] = c.n;
    item["weight"] = number(std::norm(c.amplitude));
    if (!c.empty()) {
      present.push_back(c.n);
      item["delay"] = number(c.delay);
      item["norm"] = number(c.norm);
      output.file("component_" + std::to_string(c.n) + ".csv", csv(c.envelope));
      table.add("n = " + std::to_string(c.n),
                "weight " + with_si_prefix(std::norm(c.amplitude), "", 4) + ", delay " +
                    with_si_prefix(c.delay, "s") + ", norm " + with_si_prefix(c.norm, "", 6));
    }
    components.push_back(std::move(item));
  }
  Json overlaps = Json::array();
  for (std::size_t i = 0; i < present.size(); ++i)
    for (std::size_t j = i + 1; j < present.size(); ++j) {
      const double o = pairwise_overlap(state, present[i], present[j]);
      overlaps.push_back({{"m", present[i]}, {"n", present[j]}, {"overlap", number(o)}});
      table.add("overlap <" + std::to_string(present[i]) + "|" + std::to_string(present[j]) + ">",
                with_si_prefix(o, "", 6));
    }
  table.add_rule();
  table.add("vacuum weight", with_si_prefix(state.vacuum_weight(), "", 4));
  std::vector<std::string> warnings;
  if (gate.feasible) {
    table.add("gate window", with_si_prefix(gate.window.start, "s") + " .. " +
                                 with_si_prefix(gate.window.end, "s"));
    table.add("success (n = 1 captured)", with_si_prefix(gate.success, "", 6));
    table.add("yield", with_si_prefix(gate.yield, "", 6));
    table.add("purity", with_si_prefix(gate.purity, "", 6));
  } else {
    table.add("gate", "no window reaches success " + shortest(config.gate.min_success));
    warnings.push_back("no gate window reaches the requested success");
  }

  Json results;
  results["engine"] = to_string(engine);
  results["components"] = components;
  results["overlaps"] = overlaps;
  results["vacuum_weight"] = number(state.vacuum_weight());
  results["min_success"] = number(config.gate.min_success);
  results["gate"] = to_json(gate);
  output.finish("filter", config, std::move(results), warnings, table);
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepCliOptions {
  std::vector<std::string> axes;
  std::optional<std::string> engine;
  std::optional<std::string> metrics;
  std::optional<int> threads;
  bool quiet = false;
};

int cmd_sweep(const Common& common, const SweepCliOptions& opt, std::ostream& out,
              std::ostream& err) {
  RunConfig config = load(common);
  SweepPlan plan = config.sweep;
  if (!opt.axes.empty()) {
    plan.axes.clear();
    for (const auto& a : opt.axes) plan.axes.push_back(parse_axis_spec(a));
  }
  if (opt.engine) plan.engine = engine_from_string(*opt.engine);
  if (opt.metrics) {
    plan.metrics.clear();
    std::istringstream list(*opt.metrics);
    std::string m;
    while (std::getline(list, m, ',')) plan.metrics.push_back(m);
  }
  if (opt.threads) plan.threads = *opt.threads;
  if (plan.axes.empty()) throw ValidationError("sweep", "no axes: use --axis or a [sweep] section");
  config.sweep = plan;
  Output output(common, out);

  SweepProgress progress;
  if (!opt.quiet) {
    progress = [&err](std::size_t done, std::size_t total) {
      if (done == total || done % std::max<std::size_t>(1, total / 20) == 0)
        err << "sweep: " << done << "/" << total << " points\n";
    };
  }
  const SweepTable table = run_sweep(config.scenario, plan, progress);
  std::ostringstream csv_text, jsonl_text;
  write_sweep_csv(csv_text, table);
  write_sweep_jsonl(jsonl_text, table);
  output.file("sweep.csv", csv_text.str());
  output.file("sweep.jsonl", jsonl_text.str());

  std::size_t failures = 0;
  for (const auto& row : table.rows) failures += row.error.empty() ? 0 : 1;
  std::vector<std::string> warnings;
  if (failures) warnings.push_back(std::to_string(failures) + " grid points failed; see the error column");

  if (!output.dir() && !output.json()) {
    out << csv_text.str();
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    return kExitOk;
  }
  TextTable summary("Sweep over " + std::to_string(table.rows.size()) + " points, " +
                    to_string(plan.engine) + " engine");
  for (const auto& a : plan.axes)
    summary.add(to_string(a.parameter), to_string(a.spacing) + " " + shortest(a.min) + " .. " +
                                            shortest(a.max) + " (" + std::to_string(a.count) + ")");
  summary.add("failed points", std::to_string(failures));
  Json results;
  results["points"] = table.rows.size();
  results["failed_points"] = failures;
  results["columns"] = table.columns;
  if (!output.dir()) {
    Json rows = Json::array();
    std::istringstream lines(jsonl_text.str());
    std::string line;
    while (std::getline(lines, line)) rows.push_back(Json::parse(line));
    results["rows"] = rows;
  }
  output.finish("sweep", config, std::move(results), warnings, summary);
  return kExitOk;
}

// ---------------------------------------------------------------- presets

int cmd_presets(bool json, std::ostream& out) {
  if (json) {
    Json list = Json::array();
    for (const auto& name : preset_names())
      list.push_back({{"name", name}, {"config", echo_config(preset(name))}});
    out << Json{{"schema_version", kSchemaVersion}, {"presets", list}}.dump(2) << '\n';
    return kExitOk;
  }
  TextTable table("Presets");
  for (const auto& name : preset_names()) table.add(name, preset_summary(name));
  table.render(out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon-number-selective slow light: delays, feasibility, propagation, gating"};
  app.name("fockdelay");
  app.require_subcommand(1);

  Common common;
  SectorOptions sector_opt;
  SolveCliOptions solve_opt;
  FilterOptions filter_opt;
  SweepCliOptions sweep_opt;
  bool presets_json = false;

  auto* delay = app.add_subcommand("delay", "Closed-form delays tau_n and spacings dtau_m");
  add_common(delay, common);
  auto* feas = app.add_subcommand("feasibility", "Check the operating conditions");
  add_common(feas, common);
  auto* prop = app.add_subcommand("propagate", "Propagate one Fock sector");
  add_common(prop, common);
  prop->add_option("--sector", sector_opt.sector, "Fock sector n")->check(CLI::NonNegativeNumber);
  prop->add_option("--engine", sector_opt.engine, "analytic | spectral | time-domain");
  auto* td = app.add_subcommand("solve-td", "Time-domain Maxwell-Bloch integration");
  add_common(td, common);
  td->add_option("--sector", solve_opt.sector, "Fock sector for fixed mode")
      ->check(CLI::NonNegativeNumber);
  td->add_option("--mode", solve_opt.mode, "fixed | dynamic");
  td->add_option("--z-points", solve_opt.z_points, "Spatial nodes")->check(CLI::Range(2, 1 << 20));
  auto* filt = app.add_subcommand("filter", "Assemble the output state and optimize a time gate");
  add_common(filt, common);
  filt->add_option("--engine", filter_opt.engine, "analytic | spectral | time-domain");
  filt->add_option("--s-min", filter_opt.s_min, "Minimum one-photon capture")
      ->check(CLI::Range(0.0, 1.0));
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep");
  add_common(sweep, common);
  sweep->add_option("--axis", sweep_opt.axes, "PARAM:linear|log:MIN:MAX:COUNT (SI units)");
  sweep->add_option("--engine", sweep_opt.engine, "analytic | spectral | time-domain");
  sweep->add_option("--metrics", sweep_opt.metrics, "Comma list: delays,feasibility,propagation,gate");
  sweep->add_option("--threads", sweep_opt.threads, "Worker threads (0: all cores)")
      ->check(CLI::NonNegativeNumber);
  sweep->add_flag("--quiet", sweep_opt.quiet, "No progress on stderr");
  auto* pre = app.add_subcommand("presets", "List the named parameter sets");
  pre->add_flag("--json", presets_json, "JSON output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (delay->parsed()) return cmd_delay(common, out);
    if (feas->parsed()) return cmd_feasibility(common, out);
    if (prop->parsed()) return cmd_propagate(common, sector_opt, out);
    if (td->parsed()) return cmd_solve(common, solve_opt, out);
    if (filt->parsed()) return cmd_filter(common, filter_opt, out);
    if (sweep->parsed()) return cmd_sweep(common, sweep_opt, out, err);
    if (pre->parsed()) return cmd_presets(presets_json, out);
  } catch (const ConfigError& e) {
    for (const auto& issue : e.issues())
      err << "config error" << (issue.line > 0 ? " (line " + std::to_string(issue.line) + ")" : "")
          << ": " << issue.message << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitValidation;
}

}  // namespace fockdelay::cli
