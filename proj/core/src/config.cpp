#include "fockdelay/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "fockdelay/format.hpp"

namespace fockdelay {

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::string text;
  for (const auto& issue : issues) {
    if (!text.empty()) text += "; ";
    if (issue.line > 0) text += "line " + std::to_string(issue.line) + ": ";
    text += issue.message;
  }
  return text;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : ValidationError("config", join_issues(issues)), issues_(std::move(issues)) {}

// ---------------------------------------------------------------- presets

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"paper-2009", "demo-feasible"};
  return names;
}

RunConfig preset(const std::string& name) {
  const double half = 1.0 / std::sqrt(2.0);
  RunConfig config;
  config.preset = name;
  if (name == "paper-2009") {
    // Cold-atom numbers: marginal on cavity damping and separation.
    config.scenario.medium = from_macroscopic(10.0, 3e6, 0.01, 1e5);
    config.scenario.cavity = CavitySpec{1e7, 1e6, 0};
    config.scenario.pulse = ProbePulse(EnvelopeShape::gaussian, 100e-9, {0.0, half, half});
  } else if (name == "demo-feasible") {
    // Denser, longer-lived variant where every gate passes.
    config.scenario.medium = from_macroscopic(400.0, 3e6, 0.01, 1e6);
    config.scenario.cavity = CavitySpec{1e7, 1e4, 0};
    config.scenario.pulse = ProbePulse(EnvelopeShape::gaussian, 1e-6, {0.0, half, half});
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError("preset", "unknown preset '" + name + "' (" + known + ")");
  }
  return config;
}

std::string preset_summary(const std::string& name) {
  const RunConfig c = preset(name);
  const auto& s = c.scenario;
  std::ostringstream out;
  out << "OD=" << shortest(derive(s.medium).optical_depth) << " N=" << shortest(s.medium.atoms)
      << " L=" << shortest(s.medium.length) << " m Gamma=" << shortest(s.medium.gamma)
      << " rad/s G=" << shortest(s.cavity.G) << " rad/s kappa=" << shortest(s.cavity.kappa)
      << " rad/s T=" << shortest(s.pulse.duration()) << " s n_max=" << s.pulse.n_max();
  return out.str();
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Kind { number, integer, text, rate, time, length, speed, list };

const std::map<std::string, std::map<std::string, Kind>>& schema() {
  static const std::map<std::string, std::map<std::string, Kind>> s = {
      {"", {{"preset", Kind::text}}},
      {"medium",
       {{"OD", Kind::number},
        {"g", Kind::rate},
        {"N", Kind::text},
        {"L", Kind::length},
        {"Gamma", Kind::rate},
        {"c", Kind::speed}}},
      {"cavity", {{"G", Kind::rate}, {"kappa", Kind::rate}, {"n0", Kind::integer}}},
      {"pulse",
       {{"shape", Kind::text},
        {"T", Kind::time},
        {"amplitudes", Kind::list},
        {"amplitudes_im", Kind::list},
        {"n_max", Kind::integer},
        {"normalize", Kind::text},
        {"samples", Kind::text}}},
      {"numerics",
       {{"rate_convention", Kind::text},
        {"samples_per_T", Kind::number},
        {"z_points", Kind::integer},
        {"padding_factor", Kind::number},
        {"snapshots", Kind::integer}}},
      {"thresholds",
       {{"strong", Kind::number},
        {"adiabaticity", Kind::number},
        {"pulse_fits", Kind::number},
        {"separation_lower", Kind::number},
        {"separation_upper", Kind::number},
        {"marginal_band", Kind::number}}},
      {"gate",
       {{"s_min", Kind::number}, {"start_points", Kind::integer}, {"width_points", Kind::integer}}},
      {"sweep",
       {{"axis", Kind::text},
        {"engine", Kind::text},
        {"metrics", Kind::text},
        {"threads", Kind::integer}}},
      {"run", {{"engine", Kind::text}, {"sector", Kind::integer}, {"mode", Kind::text}}},
  };
  return s;
}

struct Entry {
  std::string value;
  int line = 0;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> parts;
  std::istringstream in(s);
  std::string w;
  while (in >> w) parts.push_back(w);
  return parts;
}

struct Scale {
  double multiply = 1.0;
  double divide = 1.0;
};

std::optional<Scale> unit_scale(Kind kind, const std::string& unit, RateConvention convention) {
  const double cyc = convention == RateConvention::cyclic ? 2.0 * kPi : 1.0;
  static const std::map<std::string, Scale> rates = {
      {"rad/s", {1.0, 1.0}}, {"krad/s", {1e3, 1.0}}, {"Mrad/s", {1e6, 1.0}}, {"Grad/s", {1e9, 1.0}}};
  static const std::map<std::string, double> hertz = {
      {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
  static const std::map<std::string, Scale> times = {
      {"s", {1.0, 1.0}},   {"ms", {1.0, 1e3}},  {"us", {1.0, 1e6}},
      {"µs", {1.0, 1e6}},  {"ns", {1.0, 1e9}},  {"ps", {1.0, 1e12}}, {"fs", {1.0, 1e15}}};
  static const std::map<std::string, Scale> lengths = {
      {"m", {1.0, 1.0}},  {"km", {1e3, 1.0}}, {"cm", {1.0, 1e2}}, {"mm", {1.0, 1e3}},
      {"um", {1.0, 1e6}}, {"µm", {1.0, 1e6}}, {"nm", {1.0, 1e9}}};
  static const std::map<std::string, Scale> speeds = {{"m/s", {1.0, 1.0}}, {"km/s", {1e3, 1.0}}};
  auto find = [&](const std::map<std::string, Scale>& table) -> std::optional<Scale> {
    const auto it = table.find(unit);
    if (it == table.end()) return std::nullopt;
    return it->second;
  };
  switch (kind) {
    case Kind::rate: {
      if (auto s = find(rates)) return s;
      const auto it = hertz.find(unit);
      if (it == hertz.end()) return std::nullopt;
      return Scale{it->second * cyc, 1.0};
    }
    case Kind::time: return find(times);
    case Kind::length: return find(lengths);
    case Kind::speed: return find(speeds);
    default: return std::nullopt;
  }
}

const char* unit_hint(Kind kind) {
  switch (kind) {
    case Kind::rate: return "rad/s, krad/s, Mrad/s, Hz, kHz, MHz, GHz";
    case Kind::time: return "s, ms, us, ns, ps";
    case Kind::length: return "m, cm, mm, um";
    case Kind::speed: return "m/s";
    default: return "";
  }
}

class Parser {
 public:
  explicit Parser(std::filesystem::path base_dir) : base_dir_(std::move(base_dir)) {}

  RunConfig run(std::istream& in) {
    read(in);
    RunConfig config;
    if (auto e = get("", "preset")) {
      try {
        config = preset(e->value);
      } catch (const ValidationError& ex) {
        error(e->line, ex.what());
      }
    }
    if (auto e = get("numerics", "rate_convention")) {
      if (e->value == "angular") {
        convention_ = RateConvention::angular;
      } else if (e->value == "cyclic") {
        convention_ = RateConvention::cyclic;
      } else {
        error(e->line, "numerics.rate_convention must be angular or cyclic");
      }
    }
    config.scenario.numerics.rate_convention = convention_;
    const bool has_preset = !config.preset.empty();

    apply_numerics(config.scenario.numerics);
    apply_thresholds(config.scenario.thresholds);
    apply_medium(config.scenario.medium, has_preset);
    apply_cavity(config.scenario.cavity, has_preset);
    apply_pulse(config, has_preset);
    apply_gate(config.gate);
    apply_sweep(config.sweep);
    config.sweep.gate = config.gate;
    apply_run(config.run);

    if (issues_.empty()) {
      try {
        config.scenario.validate();
      } catch (const ValidationError& ex) {
        error(line_of(ex.field()), ex.what());
      }
    }
    if (!issues_.empty()) throw ConfigError(issues_);
    return config;
  }

 private:
  void error(int line, const std::string& message) { issues_.push_back({line, message}); }

  // Line of a "section.key" field, 0 when the config does not set it.
  int line_of(const std::string& field) const {
    const auto dot = field.find('.');
    if (dot == std::string::npos) return 0;
    const auto e = get(field.substr(0, dot), field.substr(dot + 1));
    return e ? e->line : 0;
  }

  void read(std::istream& in) {
    std::string raw;
    std::string section;
    int line = 0;
    bool section_seen = false;
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (text.empty()) continue;
      if (text.front() == '[') {
        if (text.back() != ']') {
          error(line, "malformed section header '" + text + "'");
          continue;
        }
        section = trim(text.substr(1, text.size() - 2));
        section_seen = true;
        if (section.empty() || !schema().count(section)) {
          error(line, "unknown section [" + section + "]");
          section = "?";
        }
        continue;
      }
      const auto eq = text.find('=');
      if (eq == std::string::npos) {
        error(line, "expected key = value");
        continue;
      }
      const std::string key = trim(text.substr(0, eq));
      const std::string value = trim(text.substr(eq + 1));
      if (section == "?") continue;
      const auto& keys = schema().at(section_seen ? section : "");
      if (!keys.count(key)) {
        error(line, "unknown key '" + key + "'" +
                        (section.empty() ? std::string(" outside a section")
                                         : " in [" + section + "]"));
        continue;
      }
      if (value.empty()) {
        error(line, "missing value for '" + key + "'");
        continue;
      }
      if (section == "sweep" && key == "axis") {
        axes_.push_back({value, line});
        continue;
      }
      auto& slot = entries_[section][key];
      if (slot.line != 0) {
        error(line, "duplicate key '" + key + "' (first on line " + std::to_string(slot.line) + ")");
        continue;
      }
      slot = {value, line};
    }
  }

  std::optional<Entry> get(const std::string& section, const std::string& key) const {
    const auto s = entries_.find(section);
    if (s == entries_.end()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  }

  std::optional<double> number(const Entry& e, const std::string& name) {
    double v = 0.0;
    if (!parse_double(e.value, v) || !std::isfinite(v)) {
      if (words(e.value).size() > 1)
        error(e.line, name + " is dimensionless; drop the unit");
      else
        error(e.line, name + ": '" + e.value + "' is not a number");
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> quantity(const std::string& text, int line, Kind kind,
                                 const std::string& name) {
    const auto parts = words(text);
    if (parts.size() == 1) {
      error(line, name + " needs a unit (" + unit_hint(kind) + ")");
      return std::nullopt;
    }
    double v = 0.0;
    if (parts.size() != 2 || !parse_double(parts[0], v) || !std::isfinite(v)) {
      error(line, name + ": expected '<number> <unit>', got '" + text + "'");
      return std::nullopt;
    }
    const auto scale = unit_scale(kind, parts[1], convention_);
    if (!scale) {
      error(line, name + ": unknown unit '" + parts[1] + "' (" + unit_hint(kind) + ")");
      return std::nullopt;
    }
    return v * scale->multiply / scale->divide;
  }

  std::optional<double> quantity(const Entry& e, Kind kind, const std::string& name) {
    return quantity(e.value, e.line, kind, name);
  }

  std::optional<int> integer(const Entry& e, const std::string& name) {
    double v = 0.0;
    if (!parse_double(e.value, v) || v != std::floor(v) || std::abs(v) > 1e9) {
      error(e.line, name + ": '" + e.value + "' is not an integer");
      return std::nullopt;
    }
    return static_cast<int>(v);
  }

  std::optional<std::vector<double>> list(const Entry& e, const std::string& name) {
    std::vector<double> out;
    for (const auto& item : split(e.value, ',')) {
      double v = 0.0;
      if (!parse_double(item, v) || !std::isfinite(v)) {
        error(e.line, name + ": '" + item + "' is not a number");
        return std::nullopt;
      }
      out.push_back(v);
    }
    return out;
  }

  template <typename T, typename F>
  void set(const std::string& section, const std::string& key, T& target, F&& convert) {
    if (auto e = get(section, key))
      if (auto v = convert(*e, section + "." + key)) target = static_cast<T>(*v);
  }

  void apply_numerics(Numerics& n) {
    auto num = [this](const Entry& e, const std::string& name) { return number(e, name); };
    auto num_int = [this](const Entry& e, const std::string& name) { return integer(e, name); };
    set("numerics", "samples_per_T", n.samples_per_duration, num);
    set("numerics", "z_points", n.z_points, num_int);
    set("numerics", "padding_factor", n.padding_factor, num);
    set("numerics", "snapshots", n.snapshot_count, num_int);
  }

  void apply_thresholds(Thresholds& t) {
    auto num = [this](const Entry& e, const std::string& name) { return number(e, name); };
    set("thresholds", "strong", t.strong, num);
    set("thresholds", "adiabaticity", t.adiabaticity, num);
    set("thresholds", "pulse_fits", t.pulse_fits, num);
    set("thresholds", "separation_lower", t.separation_lower, num);
    set("thresholds", "separation_upper", t.separation_upper, num);
    set("thresholds", "marginal_band", t.marginal_band, num);
  }

  void apply_medium(MediumSpec& medium, bool has_preset) {
    const auto od_e = get("medium", "OD");
    const auto g_e = get("medium", "g");
    const auto n_e = get("medium", "N");
    std::optional<double> od, g, atoms, length, gamma, c;
    bool synthetic = false;
    if (od_e) od = number(*od_e, "medium.OD");
    if (g_e) g = quantity(*g_e, Kind::rate, "medium.g");
    if (n_e) {
      if (n_e->value == "synthetic") {
        synthetic = true;
      } else {
        atoms = number(*n_e, "medium.N");
      }
    }
    if (auto e = get("medium", "L")) length = quantity(*e, Kind::length, "medium.L");
    if (auto e = get("medium", "Gamma")) gamma = quantity(*e, Kind::rate, "medium.Gamma");
    if (auto e = get("medium", "c")) c = quantity(*e, Kind::speed, "medium.c");

    if (od_e && g_e) {
      error(g_e->line, "give either medium.OD or medium.g, not both");
      return;
    }
    const int line = od_e ? od_e->line : g_e ? g_e->line : 0;
    if (!has_preset) {
      if (!od_e && !g_e) error(0, "medium needs OD or g");
      if (!length && !get("medium", "L")) error(0, "medium.L is required");
      if (!gamma && !get("medium", "Gamma")) error(0, "medium.Gamma is required");
      if (g_e && !n_e) error(g_e->line, "medium.g needs medium.N");
    }
    if (!issues_.empty()) return;

    const MediumSpec base = medium;
    const double L = length.value_or(base.length);
    const double G = gamma.value_or(base.gamma);
    const double C = c.value_or(has_preset ? base.c : kSpeedOfLight);
    const bool keep_synthetic = synthetic || (!n_e && base.synthetic_atoms);
    const std::optional<double> N =
        keep_synthetic ? std::nullopt : std::optional<double>(atoms.value_or(base.atoms));
    try {
      if (od) {
        medium = from_macroscopic(*od, G, L, N, C);
      } else if (g) {
        medium = MediumSpec{*g, N.value_or(kSyntheticAtomCount), L, G, C, !N.has_value()};
        validate(medium);
      } else if (length || gamma || c || n_e) {
        medium = from_macroscopic(derive(base).optical_depth, G, L, N, C);
      }
    } catch (const ValidationError& ex) {
      error(line, ex.what());
    }
  }

  void apply_cavity(CavitySpec& cavity, bool has_preset) {
    auto rate = [this](const Entry& e, const std::string& name) {
      return quantity(e, Kind::rate, name);
    };
    if (!has_preset && !get("cavity", "G")) error(0, "cavity.G is required");
    set("cavity", "G", cavity.G, rate);
    set("cavity", "kappa", cavity.kappa, rate);
    set("cavity", "n0", cavity.n0,
        [this](const Entry& e, const std::string& name) { return integer(e, name); });
  }

  void apply_pulse(RunConfig& config, bool has_preset) {
    const ProbePulse& base = config.scenario.pulse;
    EnvelopeShape shape = has_preset ? base.shape() : EnvelopeShape::gaussian;
    int shape_line = 0;
    if (auto e = get("pulse", "shape")) {
      shape_line = e->line;
      try {
        shape = envelope_shape_from_string(e->value);
      } catch (const ValidationError& ex) {
        error(e->line, ex.what());
      }
    }
    std::optional<double> T = has_preset ? std::optional<double>(base.duration()) : std::nullopt;
    if (auto e = get("pulse", "T")) {
      T = quantity(*e, Kind::time, "pulse.T");
      if (T && !(*T > 0.0)) {
        error(e->line, "pulse.T must be positive");
        T.reset();
      }
    } else if (!has_preset) {
      error(0, "pulse.T is required");
    }

    std::vector<Complex> amplitudes;
    int amp_line = 0;
    const auto re_e = get("pulse", "amplitudes");
    const auto im_e = get("pulse", "amplitudes_im");
    if (re_e) {
      amp_line = re_e->line;
      if (auto re = list(*re_e, "pulse.amplitudes")) {
        for (double v : *re) amplitudes.emplace_back(v, 0.0);
      }
      if (im_e) {
        if (auto im = list(*im_e, "pulse.amplitudes_im")) {
          if (im->size() != amplitudes.size()) {
            error(im_e->line, "pulse.amplitudes_im must match pulse.amplitudes in length");
          } else {
            for (std::size_t i = 0; i < im->size(); ++i) amplitudes[i].imag((*im)[i]);
          }
        }
      }
    } else if (im_e) {
      error(im_e->line, "pulse.amplitudes_im needs pulse.amplitudes");
    } else if (has_preset) {
      amplitudes = base.amplitudes();
    } else {
      amplitudes.assign(static_cast<std::size_t>(kDefaultNMax) + 1, Complex{});
      amplitudes[1] = 1.0;
    }

    if (auto e = get("pulse", "normalize")) {
      if (e->value == "true") {
        double total = 0.0;
        for (const auto& a : amplitudes) total += std::norm(a);
        if (total > 0.0)
          for (auto& a : amplitudes) a /= std::sqrt(total);
      } else if (e->value != "false") {
        error(e->line, "pulse.normalize must be true or false");
      }
    }

    std::optional<SampledEnvelope> samples;
    if (auto e = get("pulse", "samples")) {
      const std::filesystem::path p = std::filesystem::path(e->value).is_absolute()
                                          ? std::filesystem::path(e->value)
                                          : base_dir_ / e->value;
      config.samples_path = p.lexically_normal().string();
      std::ifstream file(config.samples_path);
      if (!file) {
        error(e->line, "cannot open samples file '" + config.samples_path + "'");
      } else {
        try {
          samples = read_csv(file);
        } catch (const std::exception& ex) {
          error(e->line, std::string("samples file: ") + ex.what());
        }
      }
      if (get("pulse", "shape") && shape != EnvelopeShape::custom)
        error(e->line, "pulse.samples requires shape = custom");
      shape = EnvelopeShape::custom;
    } else if (shape == EnvelopeShape::custom) {
      if (base.custom_samples() && has_preset)
        samples = *base.custom_samples();
      else
        error(shape_line, "shape = custom needs pulse.samples");
    }
    if (!issues_.empty() || !T) return;

    try {
      if (shape == EnvelopeShape::custom)
        config.scenario.pulse = ProbePulse(*samples, *T, amplitudes);
      else
        config.scenario.pulse = ProbePulse(shape, *T, amplitudes);
    } catch (const ValidationError& ex) {
      error(amp_line, ex.what());
      return;
    }
    if (auto e = get("pulse", "n_max")) {
      if (auto n = integer(*e, "pulse.n_max")) {
        try {
          config.scenario.pulse = config.scenario.pulse.with_n_max(*n);
        } catch (const ValidationError& ex) {
          error(e->line, std::string(ex.what()) + " (n_max below an occupied Fock state?)");
        }
      }
    }
  }

  void apply_gate(GateSearch& gate) {
    auto num_int = [this](const Entry& e, const std::string& name) { return integer(e, name); };
    set("gate", "s_min", gate.min_success,
        [this](const Entry& e, const std::string& name) { return number(e, name); });
    set("gate", "start_points", gate.start_points, num_int);
    set("gate", "width_points", gate.width_points, num_int);
    if (!(gate.min_success > 0.0 && gate.min_success <= 1.0))
      error(get("gate", "s_min") ? get("gate", "s_min")->line : 0, "gate.s_min must lie in (0, 1]");
    if (gate.start_points < 2 || gate.width_points < 1)
      error(0, "gate needs start_points >= 2 and width_points >= 1");
  }

  void apply_sweep(SweepPlan& plan) {
    for (const auto& e : axes_) {
      if (auto axis = parse_axis(e)) plan.axes.push_back(*axis);
    }
    if (auto e = get("sweep", "engine")) {
      try {
        plan.engine = engine_from_string(e->value);
      } catch (const ValidationError& ex) {
        error(e->line, ex.what());
      }
    }
    if (auto e = get("sweep", "metrics")) {
      plan.metrics = split(e->value, ',');
      for (const auto& m : plan.metrics)
        if (std::find(sweep_metric_names().begin(), sweep_metric_names().end(), m) ==
            sweep_metric_names().end())
          error(e->line, "unknown sweep metric '" + m + "'");
    }
    set("sweep", "threads", plan.threads,
        [this](const Entry& e, const std::string& name) { return integer(e, name); });
    if (!plan.axes.empty() && issues_.empty()) {
      try {
        plan.validate();
      } catch (const ValidationError& ex) {
        error(axes_.front().line, ex.what());
      }
    }
  }

  std::optional<SweepAxis> parse_axis(const Entry& e) {
    const auto t = words(e.value);
    if (t.size() < 2) {
      error(e.line, "sweep.axis: expected '<parameter> <linear|log> <min> <max> <count>'");
      return std::nullopt;
    }
    SweepAxis axis;
    try {
      axis.parameter = sweep_parameter_from_string(t[0]);
      axis.spacing = spacing_from_string(t[1]);
    } catch (const ValidationError& ex) {
      error(e.line, ex.what());
      return std::nullopt;
    }
    Kind kind = Kind::number;
    if (axis.parameter == SweepParameter::G || axis.parameter == SweepParameter::kappa ||
        axis.parameter == SweepParameter::Gamma)
      kind = Kind::rate;
    if (axis.parameter == SweepParameter::T) kind = Kind::time;
    const std::size_t expected = kind == Kind::number ? 5 : 7;
    if (t.size() != expected) {
      error(e.line, "sweep.axis " + t[0] + ": expected " +
                        (kind == Kind::number ? std::string("<min> <max> <count>")
                                              : std::string("<min> <unit> <max> <unit> <count>")));
      return std::nullopt;
    }
    std::optional<double> lo, hi;
    if (kind == Kind::number) {
      double a = 0.0, b = 0.0;
      if (parse_double(t[2], a)) lo = a;
      if (parse_double(t[3], b)) hi = b;
      if (!lo || !hi) error(e.line, "sweep.axis: bad range");
    } else {
      lo = quantity(t[2] + " " + t[3], e.line, kind, "sweep.axis min");
      hi = quantity(t[4] + " " + t[5], e.line, kind, "sweep.axis max");
    }
    Entry count{t.back(), e.line};
    const auto n = integer(count, "sweep.axis count");
    if (!lo || !hi || !n) return std::nullopt;
    axis.min = *lo;
    axis.max = *hi;
    axis.count = *n;
    return axis;
  }

  void apply_run(RunSection& run) {
    if (auto e = get("run", "engine")) {
      try {
        run.engine = engine_from_string(e->value);
      } catch (const ValidationError& ex) {
        error(e->line, ex.what());
      }
    }
    set("run", "sector", run.sector,
        [this](const Entry& e, const std::string& name) { return integer(e, name); });
    if (run.sector < 0) error(get("run", "sector")->line, "run.sector must be >= 0");
    if (auto e = get("run", "mode")) {
      if (e->value == "fixed") {
        run.mode = SolveMode::fixed_sector;
      } else if (e->value == "dynamic") {
        run.mode = SolveMode::dynamic_filling;
      } else {
        error(e->line, "run.mode must be fixed or dynamic");
      }
    }
  }

  std::filesystem::path base_dir_;
  RateConvention convention_ = RateConvention::angular;
  std::map<std::string, std::map<std::string, Entry>> entries_;
  std::vector<Entry> axes_;
  std::vector<ConfigIssue> issues_;
};

}  // namespace

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  return Parser(base_dir).run(in);
}

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  std::istringstream in(text);
  return parse_config(in, base_dir);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{0, "cannot open config file '" + path.string() + "'"}});
  return parse_config(in, path.parent_path());
}

SweepAxis parse_axis_spec(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 5)
    throw ValidationError("axis", "expected <parameter>:<linear|log>:<min>:<max>:<count>, got '" +
                                      spec + "'");
  SweepAxis axis;
  axis.parameter = sweep_parameter_from_string(parts[0]);
  axis.spacing = spacing_from_string(parts[1]);
  double count = 0.0;
  if (!parse_double(parts[2], axis.min) || !parse_double(parts[3], axis.max) ||
      !parse_double(parts[4], count) || count != std::floor(count))
    throw ValidationError("axis", "bad numbers in '" + spec + "'");
  axis.count = static_cast<int>(count);
  return axis;
}

// ---------------------------------------------------------------- echo

namespace {

std::string join(const std::vector<double>& values) {
  std::string s;
  for (double v : values) s += (s.empty() ? "" : ", ") + shortest(v);
  return s;
}

std::string axis_unit(SweepParameter p) {
  switch (p) {
    case SweepParameter::G:
    case SweepParameter::kappa:
    case SweepParameter::Gamma: return " rad/s";
    case SweepParameter::T: return " s";
    default: return "";
  }
}

}  // namespace

std::string echo_config(const RunConfig& config) {
  const Scenario& s = config.scenario;
  std::ostringstream out;
  if (!config.preset.empty()) out << "preset = " << config.preset << "\n";
  out << "\n[medium]\n";
  out << "g = " << shortest(s.medium.g) << " rad/s\n";
  out << "N = " << (s.medium.synthetic_atoms ? std::string("synthetic") : shortest(s.medium.atoms))
      << "\n";
  out << "L = " << shortest(s.medium.length) << " m\n";
  out << "Gamma = " << shortest(s.medium.gamma) << " rad/s\n";
  out << "c = " << shortest(s.medium.c) << " m/s\n";
  out << "# derived: OD = " << shortest(derive(s.medium).optical_depth) << "\n";

  out << "\n[cavity]\n";
  out << "G = " << shortest(s.cavity.G) << " rad/s\n";
  out << "kappa = " << shortest(s.cavity.kappa) << " rad/s\n";
  out << "n0 = " << s.cavity.n0 << "\n";

  out << "\n[pulse]\n";
  out << "shape = " << to_string(s.pulse.shape()) << "\n";
  out << "T = " << shortest(s.pulse.duration()) << " s\n";
  std::vector<double> re, im;
  bool complex_amplitudes = false;
  for (const auto& a : s.pulse.amplitudes()) {
    re.push_back(a.real());
    im.push_back(a.imag());
    complex_amplitudes = complex_amplitudes || a.imag() != 0.0;
  }
  out << "amplitudes = " << join(re) << "\n";
  if (complex_amplitudes) out << "amplitudes_im = " << join(im) << "\n";
  if (s.pulse.shape() == EnvelopeShape::custom) out << "samples = " << config.samples_path << "\n";

  out << "\n[numerics]\n";
  out << "rate_convention = " << to_string(s.numerics.rate_convention) << "\n";
  out << "samples_per_T = " << shortest(s.numerics.samples_per_duration) << "\n";
  out << "z_points = " << s.numerics.z_points << "\n";
  out << "padding_factor = " << shortest(s.numerics.padding_factor) << "\n";
  out << "snapshots = " << s.numerics.snapshot_count << "\n";

  const Thresholds& t = s.thresholds;
  out << "\n[thresholds]\n";
  out << "strong = " << shortest(t.strong) << "\n";
  out << "adiabaticity = " << shortest(t.adiabaticity) << "\n";
  out << "pulse_fits = " << shortest(t.pulse_fits) << "\n";
  out << "separation_lower = " << shortest(t.separation_lower) << "\n";
  out << "separation_upper = " << shortest(t.separation_upper) << "\n";
  out << "marginal_band = " << shortest(t.marginal_band) << "\n";

  out << "\n[gate]\n";
  out << "s_min = " << shortest(config.gate.min_success) << "\n";
  out << "start_points = " << config.gate.start_points << "\n";
  out << "width_points = " << config.gate.width_points << "\n";

  out << "\n[sweep]\n";
  for (const auto& a : config.sweep.axes) {
    const std::string unit = axis_unit(a.parameter);
    out << "axis = " << to_string(a.parameter) << " " << to_string(a.spacing) << " "
        << shortest(a.min) << unit << " " << shortest(a.max) << unit << " " << a.count << "\n";
  }
  out << "engine = " << to_string(config.sweep.engine) << "\n";
  std::string metrics;
  for (const auto& m : config.sweep.metrics) metrics += (metrics.empty() ? "" : ", ") + m;
  out << "metrics = " << metrics << "\n";
  out << "threads = " << config.sweep.threads << "\n";

  out << "\n[run]\n";
  out << "engine = " << to_string(config.run.engine) << "\n";
  out << "sector = " << config.run.sector << "\n";
  out << "mode = " << (config.run.mode == SolveMode::dynamic_filling ? "dynamic" : "fixed") << "\n";
  return out.str();
}

}  // namespace fockdelay
