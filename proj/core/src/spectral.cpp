#include "fockdelay/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "fockdelay/analytic.hpp"
#include "fockdelay/errors.hpp"

namespace fockdelay {

TransferSpec TransferSpec::for_sector(int n, const MediumSpec& medium, const CavitySpec& cavity) {
  if (n < 0) throw ValidationError("sector", "must be >= 0");
  TransferSpec spec = with_drive(cavity.G * std::sqrt(static_cast<double>(n + 1)), medium);
  spec.n = n;
  return spec;
}

TransferSpec TransferSpec::with_drive(double omega, const MediumSpec& medium) {
  if (!(omega > 0.0)) throw ValidationError("omega", "drive Rabi frequency must be positive");
  TransferSpec spec;
  spec.omega = omega;
  spec.gsq_n = medium.collective_coupling_sq();
  spec.length = medium.length;
  spec.gamma = medium.gamma;
  spec.c = medium.c;
  return spec;
}

double TransferSpec::medium_delay() const noexcept {
  return gsq_n * length / (c * omega * omega);
}

namespace {

// Medium factor of H, without the vacuum transit phase.
Complex medium_response(double delta, const TransferSpec& spec) {
  const double depth = spec.gsq_n * spec.length / spec.c;
  const double w2 = spec.omega * spec.omega;
  Complex response;
  if (std::abs(delta) < 1e-6 * spec.omega) {
    // delta / (delta Gamma + i (delta^2 - Omega^2)) to second order.
    response = Complex(delta * delta * spec.gamma / (w2 * w2), delta / w2);
  } else {
    response = delta / Complex(delta * spec.gamma, delta * delta - w2);
  }
  return std::exp(-depth * response);
}

}  // namespace

Complex transfer_function(double delta, const TransferSpec& spec) {
  return medium_response(delta, spec) * std::exp(Complex(0.0, -delta * spec.vacuum_transit()));
}

double spectral_energy_fraction(const SampledEnvelope& envelope, double cutoff) {
  std::vector<Complex> spectrum(envelope.samples().begin(), envelope.samples().end());
  detail::fft_forward(spectrum);
  double inside = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double p = std::norm(spectrum[k]);
    total += p;
    if (std::abs(detail::bin_frequency(k, spectrum.size(), envelope.dt())) <= cutoff) inside += p;
  }
  return total > 0.0 ? inside / total : 1.0;
}

SampledEnvelope propagate(const SampledEnvelope& input, const TransferSpec& spec,
                          const PropagateOptions& options) {
  if (input.empty()) throw ValidationError("envelope", "empty input");
  const double nyquist = kPi / input.dt();
  const double containment = spectral_energy_fraction(input, 0.8 * nyquist);
  if (containment < options.spectral_containment) {
    throw NumericalError("aliasing", "only " + std::to_string(containment * 100.0) +
                                         "% of the input spectrum lies within 80% of Nyquist (" +
                                         std::to_string(nyquist) +
                                         " rad/s); refine the time grid");
  }

  const auto [start, end] = input.support(1e-10);
  const double delay = spec.medium_delay() + (options.retarded_frame ? 0.0 : spec.vacuum_transit());
  if (end + delay > input.t_end()) {
    throw NumericalError("padding-overflow",
                         "delayed pulse ends at " + std::to_string(end + delay) +
                             " s, beyond the window end " + std::to_string(input.t_end()) +
                             " s; enlarge the padding");
  }

  std::vector<Complex> data(input.samples().begin(), input.samples().end());
  detail::fft_forward(data);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const double delta = detail::bin_frequency(k, data.size(), input.dt()) + options.carrier_offset;
    data[k] *= options.retarded_frame ? medium_response(delta, spec) : transfer_function(delta, spec);
  }
  detail::fft_inverse(data);

  // Energy ahead of the input support can only come from wrap-around.
  double early = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double p = std::norm(data[i]);
    total += p;
    if (input.time(i) < start - 0.25 * (end - start)) early += p;
  }
  if (total > 0.0 && early > 1e-6 * total) {
    throw NumericalError("padding-overflow", "output energy wrapped to the start of the window");
  }

  const double t0 = options.retarded_frame ? input.t0() + spec.vacuum_transit() : input.t0();
  return SampledEnvelope(t0, input.dt(), std::move(data));
}

double measure_delay(const SampledEnvelope& input, const SampledEnvelope& output,
                     double vacuum_transit) {
  if (input.empty() || output.empty()) throw ValidationError("envelope", "empty envelope");
  if (!(output.energy() > 0.0)) throw NumericalError("zero-norm", "output envelope carries no energy");
  return output.centroid() - input.centroid() - vacuum_transit;
}

double measure_transmission(const SampledEnvelope& input, const SampledEnvelope& output) {
  const double e_in = input.energy();
  if (!(e_in > 0.0)) throw NumericalError("zero-norm", "input envelope carries no energy");
  return output.energy() / e_in;
}

TimeGrid plan_time_grid(const Scenario& scenario) {
  const ProbePulse& pulse = scenario.pulse;
  const double T = pulse.duration();
  TimeGrid grid;
  if (const SampledEnvelope* custom = pulse.custom_samples()) {
    grid.t0 = custom->t0();
    grid.dt = custom->dt();
  } else {
    grid.dt = T / scenario.numerics.samples_per_duration;
    grid.t0 = pulse.shape() == EnvelopeShape::sech ? -16.0 * T : -8.0 * T;
  }
  const double tau0 = transit_delay(0, scenario.medium, scenario.cavity) +
                      scenario.medium.length / scenario.medium.c;
  const double span = std::max(16.0 * T, 2.0 * (tau0 + T));
  const double window = scenario.numerics.padding_factor * span;
  const auto count = static_cast<std::size_t>(std::ceil(window / grid.dt));
  grid.size = next_power_of_two(std::max<std::size_t>(count, 2));
  if (const SampledEnvelope* custom = pulse.custom_samples())
    grid.size = std::max(grid.size, custom->size());
  return grid;
}

SampledEnvelope sample_envelope(const ProbePulse& pulse, const TimeGrid& grid) {
  if (const SampledEnvelope* custom = pulse.custom_samples()) {
    std::vector<Complex> samples(custom->samples().begin(), custom->samples().end());
    return SampledEnvelope::zero_padded(custom->t0(), custom->dt(), std::move(samples), grid.size);
  }
  std::vector<Complex> samples(grid.size);
  for (std::size_t i = 0; i < grid.size; ++i)
    samples[i] = pulse.envelope(grid.t0 + grid.dt * static_cast<double>(i));
  return SampledEnvelope(grid.t0, grid.dt, std::move(samples));
}

SampledEnvelope sample_envelope(const Scenario& scenario) {
  return sample_envelope(scenario.pulse, plan_time_grid(scenario));
}

}  // namespace fockdelay
