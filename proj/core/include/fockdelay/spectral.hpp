#pragma once

#include "fockdelay/envelope.hpp"
#include "fockdelay/params.hpp"

namespace fockdelay {

// Frequency-domain propagation of one Fock sector through the adiabatically
// eliminated linear medium.
//
// Transform convention (used everywhere in this library):
//   analysis   F(delta) = sum_j f(t_j) exp(-i delta t_j)
//   synthesis  f(t)     = (1/N) sum_k F(delta_k) exp(+i delta_k t)
// With this convention a pure delay tau is H = exp(-i delta tau), so the
// group delay is -d arg H / d delta and is positive for slow light.
struct TransferSpec {
  int n = 0;
  double omega = 0.0;   // Omega_n = G sqrt(n+1)
  double gsq_n = 0.0;   // g^2 N
  double length = 0.0;  // L
  double gamma = 0.0;
  double c = kSpeedOfLight;

  static TransferSpec for_sector(int n, const MediumSpec& medium, const CavitySpec& cavity);
  // Sector-free form with an explicit drive Rabi frequency.
  static TransferSpec with_drive(double omega, const MediumSpec& medium);

  // Medium-induced group delay at zero detuning, g^2 N L / (c Omega^2).
  double medium_delay() const noexcept;
  double vacuum_transit() const noexcept { return length / c; }
};

// H_n(delta) = exp(-i delta L/c) exp(-(g^2 N L / c) delta / (delta Gamma + i (delta^2 - Omega_n^2))).
// |H| <= 1 on the real line; H(0) = 1; |H(+-Omega_n)| = exp(-OD).
Complex transfer_function(double delta, const TransferSpec& spec);

struct PropagateOptions {
  // Probe detuning from two-photon resonance (rad/s); shifts delta.
  double carrier_offset = 0.0;
  // Drop the exp(-i delta L/c) vacuum factor and stamp the output with
  // t0 + L/c instead. The samples then line up with a solver that works in
  // retarded time.
  bool retarded_frame = false;
  // Minimum fraction of spectral energy that must sit inside 80% of Nyquist.
  double spectral_containment = 0.9999;
};

// Output envelope on the same sample count and spacing as the input.
// Throws NumericalError("aliasing") when the input spectrum is too close to
// Nyquist and NumericalError("padding-overflow") when the delayed pulse
// would wrap around the window.
SampledEnvelope propagate(const SampledEnvelope& input, const TransferSpec& spec,
                          const PropagateOptions& options = {});

// Fraction of spectral energy with |delta| <= cutoff.
double spectral_energy_fraction(const SampledEnvelope& envelope, double cutoff);

// Centroid shift minus the vacuum transit, i.e. the medium-induced delay.
double measure_delay(const SampledEnvelope& input, const SampledEnvelope& output,
                     double vacuum_transit = 0.0);
double measure_transmission(const SampledEnvelope& input, const SampledEnvelope& output);

// Time grid used for a scenario: dt = T / samples_per_duration, window at
// least padding_factor * max(16 T, 2 (tau_0 + T)), power-of-two count, pulse
// centred at t = 0.
struct TimeGrid {
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t size = 0;
};

TimeGrid plan_time_grid(const Scenario& scenario);
SampledEnvelope sample_envelope(const ProbePulse& pulse, const TimeGrid& grid);
SampledEnvelope sample_envelope(const Scenario& scenario);

}  // namespace fockdelay
