#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fockdelay/envelope.hpp"

namespace fockdelay {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

// Atom count used by from_macroscopic() when the caller only knows the
// optical depth. Any value works for the delay physics, which depends on
// g^2 N alone; the weak-probe check refuses to use it.
inline constexpr double kSyntheticAtomCount = 1e12;

// Ensemble of Lambda atoms. Rates are angular frequencies (rad/s).
struct MediumSpec {
  double g = 0.0;        // probe coupling per atom
  double atoms = 1.0;    // N
  double length = 0.0;   // L (m)
  double gamma = 0.0;    // excited-state decay (rad/s)
  double c = kSpeedOfLight;
  bool synthetic_atoms = false;

  // g^2 N, the only combination the linear propagation depends on.
  double collective_coupling_sq() const noexcept { return g * g * atoms; }

  bool operator==(const MediumSpec&) const = default;
};

struct CavitySpec {
  double G = 0.0;      // vacuum Rabi frequency (rad/s)
  double kappa = 0.0;  // cavity decay rate (rad/s)
  int n0 = 0;          // initial photon number

  bool operator==(const CavitySpec&) const = default;
};

struct DerivedMedium {
  double absorption_length = 0.0;  // c Gamma / (g^2 N)
  double optical_depth = 0.0;      // L / absorption_length
  double gsq_n = 0.0;
};

// Throws ValidationError naming the offending field.
void validate(const MediumSpec& medium);
void validate(const CavitySpec& cavity);

DerivedMedium derive(const MediumSpec& medium);

// Builds a medium from the quantities experiments quote. g is back-solved so
// that g^2 N = OD Gamma c / L. Without an explicit atom count the result is
// flagged synthetic.
MediumSpec from_macroscopic(double optical_depth, double gamma, double length,
                            std::optional<double> atoms = std::nullopt,
                            double c = kSpeedOfLight);

enum class EnvelopeShape { gaussian, sech, custom };

std::string to_string(EnvelopeShape shape);
EnvelopeShape envelope_shape_from_string(const std::string& name);

// Single-mode few-photon probe: a common envelope f(t) times a superposition
// of Fock states sum_n alpha_n |n>.
//
// Gaussian: f(t) = (pi T^2)^(-1/4) exp(-t^2 / (2 T^2))
// Sech:     f(t) = (2 T)^(-1/2) sech(t / T)
// Both are centred on t = 0 with unit energy.
class ProbePulse {
 public:
  ProbePulse(EnvelopeShape shape, double duration, std::vector<Complex> amplitudes);
  // Custom envelope; duration is the characteristic time used for grid and
  // feasibility purposes.
  ProbePulse(SampledEnvelope samples, double duration, std::vector<Complex> amplitudes);

  // |n> with the given envelope.
  static ProbePulse fock(EnvelopeShape shape, double duration, int n, int n_max);

  EnvelopeShape shape() const noexcept { return shape_; }
  double duration() const noexcept { return duration_; }
  int n_max() const noexcept { return static_cast<int>(amplitudes_.size()) - 1; }
  const std::vector<Complex>& amplitudes() const noexcept { return amplitudes_; }
  Complex amplitude(int n) const;
  double weight(int n) const { return std::norm(amplitude(n)); }
  // Largest n with nonzero weight.
  int max_occupied() const noexcept;
  const SampledEnvelope* custom_samples() const noexcept { return custom_.get(); }

  // Analytic envelope value; for custom pulses interpolates the samples.
  Complex envelope(double t) const;

  // Rescales amplitudes to unit total weight. Construction never does this
  // implicitly.
  ProbePulse normalized() const;
  ProbePulse with_duration(double duration) const;
  ProbePulse with_n_max(int n_max) const;

  bool operator==(const ProbePulse& other) const;

 private:
  struct Unchecked {};
  ProbePulse(Unchecked, EnvelopeShape shape, double duration, std::vector<Complex> amplitudes,
             std::shared_ptr<const SampledEnvelope> custom);
  void check() const;

  EnvelopeShape shape_ = EnvelopeShape::gaussian;
  double duration_ = 0.0;
  std::vector<Complex> amplitudes_;
  std::shared_ptr<const SampledEnvelope> custom_;
};

enum class RateConvention {
  angular,  // "1 MHz" means 1e6 rad/s
  cyclic,   // "1 MHz" means 2 pi 1e6 rad/s
};

std::string to_string(RateConvention convention);

// Ratio cutoffs used to turn the model's inequalities into pass/fail gates.
struct Thresholds {
  double strong = 10.0;          // "much greater than"
  double adiabaticity = 1.0;     // T times the transparency window
  double pulse_fits = 1.0;       // L over the in-medium pulse length
  double separation_lower = 1.0; // delta tau_1 / T
  double separation_upper = 6.0; // sqrt(OD) over delta tau_1 / T
  double marginal_band = 10.0;   // failing within this factor reads as marginal

  bool operator==(const Thresholds&) const = default;
};

struct Numerics {
  double samples_per_duration = 32.0;  // time grid: dt = T / this
  int z_points = 256;                  // time-domain spatial nodes
  double padding_factor = 4.0;         // window >= factor * span
  int snapshot_count = 32;
  RateConvention rate_convention = RateConvention::angular;

  bool operator==(const Numerics&) const = default;
};

inline constexpr int kDefaultNMax = 5;

struct Scenario {
  MediumSpec medium;
  CavitySpec cavity;
  ProbePulse pulse{EnvelopeShape::gaussian, 1e-6, {0.0, 1.0}};
  Numerics numerics;
  Thresholds thresholds;

  void validate() const;
  DerivedMedium derived() const { return derive(medium); }

  bool operator==(const Scenario&) const = default;
};

}  // namespace fockdelay
