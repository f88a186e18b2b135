#pragma once

#include <string>
#include <vector>

#include "fockdelay/params.hpp"

namespace fockdelay {

using Warnings = std::vector<std::string>;

// Closed-form propagation model. With n photons in the cavity the drive
// Rabi frequency is G sqrt(n + 1), and all formulas below follow from that
// substitution into the classical-drive slow-light results.

// v = c G^2 (n+1) / (G^2 (n+1) + g^2 N). Always in (0, c).
double group_velocity(int n, const MediumSpec& medium, const CavitySpec& cavity);

// Large-ensemble form v = c G^2 (n+1) / (g^2 N). Appends a warning when
// g^2 N / (G^2 (n+1)) < 10, where the approximation is no longer faithful.
double group_velocity_simplified(int n, const MediumSpec& medium, const CavitySpec& cavity,
                                 Warnings* warnings = nullptr);

// tau_n = OD Gamma / ((n+1) G^2) = L / group_velocity_simplified(n).
double transit_delay(int n, const MediumSpec& medium, const CavitySpec& cavity);
double transit_delay(int n, double optical_depth, double gamma, double G);

// tau_m - tau_{m+1} = OD Gamma / ((m+1)(m+2) G^2).
double differential_delay(int m, const MediumSpec& medium, const CavitySpec& cavity);
double differential_delay(int m, double optical_depth, double gamma, double G);

struct TransparencyWindow {
  double uncorrected_form = 0.0;      // G^2 sqrt(OD) / Gamma
  double corrected_form = 0.0;  // G^2 (n+1) / (Gamma sqrt(OD))
};

// Both widths are reported; feasibility gates only ever use corrected_form.
TransparencyWindow transparency_window(int n, const MediumSpec& medium, const CavitySpec& cavity);

enum class GateStatus { satisfied, marginal, violated, unavailable };

std::string to_string(GateStatus status);

struct FeasibilityCondition {
  std::string name;
  bool satisfied = false;
  GateStatus status = GateStatus::violated;
  // Oriented so that larger is better; +inf when the compared product is 0.
  double margin = 0.0;
  double threshold = 1.0;
  std::string quantity_label;
  double quantity = 0.0;
  std::string reference_label;
  double reference = 0.0;
  // Only the separation entry carries a second (upper) bound.
  bool has_upper = false;
  double upper_margin = 0.0;
  double upper_threshold = 0.0;
  std::string note;
};

struct FeasibilityReport {
  int photon_number = 0;  // worst case n_p used for every condition
  std::vector<FeasibilityCondition> conditions;

  const FeasibilityCondition& at(const std::string& name) const;
  // satisfied: every gate passes; marginal: none violated; violated otherwise.
  GateStatus verdict() const;
};

// Canonical condition order.
inline const std::vector<std::string>& feasibility_condition_names() {
  static const std::vector<std::string> names = {"adiabaticity",   "weak_probe", "atom_dominance",
                                                 "cavity_damping", "pulse_fits", "separation"};
  return names;
}

FeasibilityReport feasibility(const Scenario& scenario);

}  // namespace fockdelay
