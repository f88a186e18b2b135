#include "fockdelay/analytic.hpp"

#include <cmath>
#include <limits>

#include "fockdelay/errors.hpp"

namespace fockdelay {
namespace {

double drive_sq(int n, double G) { return G * G * static_cast<double>(n + 1); }

void require_sector(int n) {
  if (n < 0) throw ValidationError("n", "photon number must be >= 0");
}

GateStatus classify(double margin, double threshold, double band) {
  if (margin >= threshold) return GateStatus::satisfied;
  if (margin >= threshold / band) return GateStatus::marginal;
  return GateStatus::violated;
}

GateStatus worse(GateStatus a, GateStatus b) {
  auto rank = [](GateStatus s) {
    switch (s) {
      case GateStatus::satisfied: return 0;
      case GateStatus::marginal: return 1;
      case GateStatus::unavailable: return 2;
      case GateStatus::violated: return 3;
    }
    return 3;
  };
  return rank(a) >= rank(b) ? a : b;
}

// Ratio a/b where b == 0 means unbounded headroom.
double headroom(double a, double b) {
  return b == 0.0 ? std::numeric_limits<double>::infinity() : a / b;
}

}  // namespace

double group_velocity(int n, const MediumSpec& medium, const CavitySpec& cavity) {
  require_sector(n);
  const double w = drive_sq(n, cavity.G);
  return medium.c * w / (w + medium.collective_coupling_sq());
}

double group_velocity_simplified(int n, const MediumSpec& medium, const CavitySpec& cavity,
                                 Warnings* warnings) {
  require_sector(n);
  const double w = drive_sq(n, cavity.G);
  const double dominance = medium.collective_coupling_sq() / w;
  if (warnings && dominance < 10.0) {
    warnings->push_back("group_velocity_simplified: g^2 N / (G^2 (n+1)) = " +
                        std::to_string(dominance) + " < 10; large-ensemble form is inaccurate");
  }
  return medium.c * w / medium.collective_coupling_sq();
}

double transit_delay(int n, const MediumSpec& medium, const CavitySpec& cavity) {
  require_sector(n);
  return medium.length * medium.collective_coupling_sq() / (medium.c * drive_sq(n, cavity.G));
}

double transit_delay(int n, double optical_depth, double gamma, double G) {
  require_sector(n);
  return optical_depth * gamma / drive_sq(n, G);
}

double differential_delay(int m, const MediumSpec& medium, const CavitySpec& cavity) {
  require_sector(m);
  const double base = medium.length * medium.collective_coupling_sq() / (medium.c * cavity.G * cavity.G);
  return base / (static_cast<double>(m + 1) * static_cast<double>(m + 2));
}

double differential_delay(int m, double optical_depth, double gamma, double G) {
  require_sector(m);
  return optical_depth * gamma / (G * G) / (static_cast<double>(m + 1) * static_cast<double>(m + 2));
}

TransparencyWindow transparency_window(int n, const MediumSpec& medium, const CavitySpec& cavity) {
  require_sector(n);
  const double od = derive(medium).optical_depth;
  const double root = std::sqrt(od);
  TransparencyWindow w;
  w.uncorrected_form = cavity.G * cavity.G * root / medium.gamma;
  w.corrected_form = drive_sq(n, cavity.G) / (medium.gamma * root);
  return w;
}

std::string to_string(GateStatus status) {
  switch (status) {
    case GateStatus::satisfied: return "satisfied";
    case GateStatus::marginal: return "marginal";
    case GateStatus::violated: return "violated";
    case GateStatus::unavailable: return "unavailable";
  }
  return "unknown";
}

const FeasibilityCondition& FeasibilityReport::at(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return c;
  throw ValidationError("feasibility", "no condition named '" + name + "'");
}

GateStatus FeasibilityReport::verdict() const {
  GateStatus v = GateStatus::satisfied;
  for (const auto& c : conditions) {
    // An unverifiable gate cannot make the run infeasible, only unconfirmed.
    v = worse(v, c.status == GateStatus::unavailable ? GateStatus::marginal : c.status);
  }
  return v;
}

FeasibilityReport feasibility(const Scenario& scenario) {
  scenario.validate();
  const auto& medium = scenario.medium;
  const auto& cavity = scenario.cavity;
  const auto& th = scenario.thresholds;
  const double band = th.marginal_band;
  const double T = scenario.pulse.duration();
  const int np = scenario.pulse.n_max();
  const DerivedMedium d = derive(medium);

  FeasibilityReport report;
  report.photon_number = np;

  auto finish = [&](FeasibilityCondition c) {
    if (c.status != GateStatus::unavailable) {
      c.status = classify(c.margin, c.threshold, band);
      if (c.has_upper) c.status = worse(c.status, classify(c.upper_margin, c.upper_threshold, band));
    }
    c.satisfied = c.status == GateStatus::satisfied;
    report.conditions.push_back(std::move(c));
  };

  {
    // Vacuum-cavity window is the narrowest one the pulse ever sees.
    FeasibilityCondition c;
    c.name = "adiabaticity";
    const double window = transparency_window(0, medium, cavity).corrected_form;
    c.quantity_label = "T";
    c.quantity = T;
    c.reference_label = "1/delta_omega_EIT";
    c.reference = 1.0 / window;
    c.margin = T * window;
    c.threshold = th.adiabaticity;
    finish(std::move(c));
  }
  {
    FeasibilityCondition c;
    c.name = "weak_probe";
    const double eps = std::sqrt(static_cast<double>(np) / medium.atoms);
    c.quantity_label = "epsilon";
    c.quantity = eps;
    c.reference_label = "1";
    c.reference = 1.0;
    c.margin = headroom(1.0, eps);
    c.threshold = th.strong;
    if (medium.synthetic_atoms) {
      c.status = GateStatus::unavailable;
      c.note = "atom count is synthetic; set medium.N explicitly";
    }
    finish(std::move(c));
  }
  {
    FeasibilityCondition c;
    c.name = "atom_dominance";
    const double drive = cavity.G * cavity.G * static_cast<double>(np + 1);
    c.quantity_label = "g^2 N";
    c.quantity = d.gsq_n;
    c.reference_label = "G^2 (n_p+1)";
    c.reference = drive;
    c.margin = d.gsq_n / drive;
    c.threshold = th.strong;
    finish(std::move(c));
  }
  {
    FeasibilityCondition c;
    c.name = "cavity_damping";
    const double product = static_cast<double>(np) * cavity.kappa * T;
    c.quantity_label = "n_p kappa T";
    c.quantity = product;
    c.reference_label = "1";
    c.reference = 1.0;
    c.margin = headroom(1.0, product);
    c.threshold = th.strong;
    finish(std::move(c));
  }
  {
    FeasibilityCondition c;
    c.name = "pulse_fits";
    const double probe_length = group_velocity(np, medium, cavity) * T;
    c.quantity_label = "v_gr(n_p) T";
    c.quantity = probe_length;
    c.reference_label = "L";
    c.reference = medium.length;
    c.margin = medium.length / probe_length;
    c.threshold = th.pulse_fits;
    finish(std::move(c));
  }
  {
    FeasibilityCondition c;
    c.name = "separation";
    const double ratio = differential_delay(1, medium, cavity) / T;
    c.quantity_label = "delta_tau_1/T";
    c.quantity = ratio;
    c.reference_label = "sqrt(OD)";
    c.reference = std::sqrt(d.optical_depth);
    c.margin = ratio;
    c.threshold = th.separation_lower;
    c.has_upper = true;
    c.upper_margin = c.reference / ratio;
    c.upper_threshold = th.separation_upper;
    finish(std::move(c));
  }
  return report;
}

}  // namespace fockdelay
