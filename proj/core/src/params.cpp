#include "fockdelay/params.hpp"

#include <cmath>
#include <numeric>

#include "fockdelay/errors.hpp"

namespace fockdelay {
namespace {

void require_positive(double value, const char* field) {
  if (!std::isfinite(value) || !(value > 0.0))
    throw ValidationError(field, "must be positive and finite");
}

}  // namespace

void validate(const MediumSpec& medium) {
  require_positive(medium.g, "medium.g");
  require_positive(medium.length, "medium.L");
  require_positive(medium.gamma, "medium.Gamma");
  require_positive(medium.c, "medium.c");
  if (!std::isfinite(medium.atoms) || medium.atoms < 1.0)
    throw ValidationError("medium.N", "atom count must be >= 1");
}

void validate(const CavitySpec& cavity) {
  require_positive(cavity.G, "cavity.G");
  if (!std::isfinite(cavity.kappa) || cavity.kappa < 0.0)
    throw ValidationError("cavity.kappa", "must be >= 0 and finite");
  if (cavity.n0 < 0) throw ValidationError("cavity.n0", "must be >= 0");
}

DerivedMedium derive(const MediumSpec& medium) {
  validate(medium);
  DerivedMedium d;
  d.gsq_n = medium.collective_coupling_sq();
  d.absorption_length = medium.c * medium.gamma / d.gsq_n;
  d.optical_depth = medium.length / d.absorption_length;
  return d;
}

MediumSpec from_macroscopic(double optical_depth, double gamma, double length,
                            std::optional<double> atoms, double c) {
  require_positive(optical_depth, "medium.OD");
  require_positive(gamma, "medium.Gamma");
  require_positive(length, "medium.L");
  require_positive(c, "medium.c");
  MediumSpec m;
  m.atoms = atoms.value_or(kSyntheticAtomCount);
  m.synthetic_atoms = !atoms.has_value();
  m.length = length;
  m.gamma = gamma;
  m.c = c;
  m.g = std::sqrt(optical_depth * gamma * c / (length * m.atoms));
  validate(m);
  return m;
}

std::string to_string(EnvelopeShape shape) {
  switch (shape) {
    case EnvelopeShape::gaussian: return "gaussian";
    case EnvelopeShape::sech: return "sech";
    case EnvelopeShape::custom: return "custom";
  }
  return "unknown";
}

EnvelopeShape envelope_shape_from_string(const std::string& name) {
  if (name == "gaussian") return EnvelopeShape::gaussian;
  if (name == "sech") return EnvelopeShape::sech;
  if (name == "custom") return EnvelopeShape::custom;
  throw ValidationError("pulse.shape", "unknown envelope family '" + name + "'");
}

std::string to_string(RateConvention convention) {
  return convention == RateConvention::angular ? "angular" : "cyclic";
}

ProbePulse::ProbePulse(Unchecked, EnvelopeShape shape, double duration,
                       std::vector<Complex> amplitudes,
                       std::shared_ptr<const SampledEnvelope> custom)
    : shape_(shape), duration_(duration), amplitudes_(std::move(amplitudes)), custom_(std::move(custom)) {}

ProbePulse::ProbePulse(EnvelopeShape shape, double duration, std::vector<Complex> amplitudes)
    : ProbePulse(Unchecked{}, shape, duration, std::move(amplitudes), nullptr) {
  if (shape == EnvelopeShape::custom)
    throw ValidationError("pulse.shape", "custom envelopes need samples");
  check();
}

ProbePulse::ProbePulse(SampledEnvelope samples, double duration, std::vector<Complex> amplitudes)
    : ProbePulse(Unchecked{}, EnvelopeShape::custom, duration, std::move(amplitudes),
                 std::make_shared<const SampledEnvelope>(std::move(samples))) {
  check();
}

void ProbePulse::check() const {
  require_positive(duration_, "pulse.T");
  if (amplitudes_.size() < 2) throw ValidationError("pulse.n_max", "must be >= 1");
  double total = 0.0;
  for (const auto& a : amplitudes_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw ValidationError("pulse.amplitudes", "non-finite amplitude");
    total += std::norm(a);
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ValidationError("pulse.amplitudes",
                          "sum of |alpha_n|^2 must be 1 within 1e-12 (use normalized())");
  if (custom_ && !(custom_->energy() > 0.0))
    throw ValidationError("pulse.samples", "custom envelope has zero energy");
}

ProbePulse ProbePulse::fock(EnvelopeShape shape, double duration, int n, int n_max) {
  if (n < 0 || n > n_max) throw ValidationError("pulse.n", "Fock index outside 0..n_max");
  std::vector<Complex> a(static_cast<std::size_t>(n_max) + 1, Complex{});
  a[static_cast<std::size_t>(n)] = 1.0;
  return ProbePulse(shape, duration, std::move(a));
}

Complex ProbePulse::amplitude(int n) const {
  if (n < 0 || n > n_max()) return {};
  return amplitudes_[static_cast<std::size_t>(n)];
}

int ProbePulse::max_occupied() const noexcept {
  for (int n = n_max(); n > 0; --n)
    if (std::norm(amplitudes_[static_cast<std::size_t>(n)]) > 0.0) return n;
  return 0;
}

Complex ProbePulse::envelope(double t) const {
  const double T = duration_;
  switch (shape_) {
    case EnvelopeShape::gaussian:
      return std::pow(kPi * T * T, -0.25) * std::exp(-t * t / (2.0 * T * T));
    case EnvelopeShape::sech:
      return 1.0 / (std::sqrt(2.0 * T) * std::cosh(t / T));
    case EnvelopeShape::custom:
      return custom_->at(t);
  }
  return {};
}

ProbePulse ProbePulse::normalized() const {
  double total = 0.0;
  for (const auto& a : amplitudes_) total += std::norm(a);
  if (!(total > 0.0)) throw ValidationError("pulse.amplitudes", "all amplitudes are zero");
  auto scaled = amplitudes_;
  for (auto& a : scaled) a /= std::sqrt(total);
  ProbePulse p(Unchecked{}, shape_, duration_, std::move(scaled), custom_);
  p.check();
  return p;
}

ProbePulse ProbePulse::with_duration(double duration) const {
  ProbePulse p(Unchecked{}, shape_, duration, amplitudes_, custom_);
  p.check();
  return p;
}

ProbePulse ProbePulse::with_n_max(int n_max) const {
  if (n_max < 1) throw ValidationError("pulse.n_max", "must be >= 1");
  auto a = amplitudes_;
  a.resize(static_cast<std::size_t>(n_max) + 1, Complex{});
  ProbePulse p(Unchecked{}, shape_, duration_, std::move(a), custom_);
  p.check();
  return p;
}

bool ProbePulse::operator==(const ProbePulse& other) const {
  if (shape_ != other.shape_ || duration_ != other.duration_ || amplitudes_ != other.amplitudes_)
    return false;
  if (!custom_ || !other.custom_) return custom_ == other.custom_;
  return *custom_ == *other.custom_;
}

void Scenario::validate() const {
  fockdelay::validate(medium);
  fockdelay::validate(cavity);
  if (!(numerics.samples_per_duration >= 1.0))
    throw ValidationError("numerics.samples_per_T", "must be >= 1");
  if (numerics.z_points < 2) throw ValidationError("numerics.z_points", "must be >= 2");
  if (!(numerics.padding_factor >= 1.0))
    throw ValidationError("numerics.padding_factor", "must be >= 1");
  if (numerics.snapshot_count < 0)
    throw ValidationError("numerics.snapshots", "must be >= 0");
  for (double t : {thresholds.strong, thresholds.adiabaticity, thresholds.pulse_fits,
                   thresholds.separation_lower, thresholds.separation_upper})
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("thresholds", "must be positive");
  if (!(thresholds.marginal_band >= 1.0))
    throw ValidationError("thresholds.marginal_band", "must be >= 1");
}

}  // namespace fockdelay
