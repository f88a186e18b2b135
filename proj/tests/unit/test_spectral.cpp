#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "../support/scenarios.hpp"
#include "fockdelay/analytic.hpp"
#include "fockdelay/errors.hpp"
#include "fockdelay/spectral.hpp"

using namespace fockdelay;

namespace {

double window0(const Scenario& s) {
  return transparency_window(0, s.medium, s.cavity).corrected_form;
}

struct Measured {
  double delay;
  double transmission;
};

Measured run(const Scenario& s, int n, const PropagateOptions& options = {}) {
  const SampledEnvelope in = sample_envelope(s);
  const TransferSpec spec = TransferSpec::for_sector(n, s.medium, s.cavity);
  const SampledEnvelope out = propagate(in, spec, options);
  return {measure_delay(in, out, spec.vacuum_transit()), measure_transmission(in, out)};
}

}  // namespace

TEST_SUITE("spectral-propagator") {
  TEST_CASE("transfer function identities at zero detuning and at the doublet") {
    oracle::Sampler rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const MediumSpec m = from_macroscopic(rng.log_uniform(0.5, 50.0), rng.log_uniform(1e5, 1e8),
                                            rng.log_uniform(1e-3, 1.0), 1e6);
      const CavitySpec cav = rng.cavity();
      const int n = rng.integer(0, 6);
      const TransferSpec spec = TransferSpec::for_sector(n, m, cav);
      const double od = derive(m).optical_depth;
      CHECK(spec.omega == doctest::Approx(cav.G * std::sqrt(n + 1.0)).epsilon(1e-15));
      CHECK(std::abs(transfer_function(0.0, spec) - Complex(1.0, 0.0)) < 1e-12);
      for (double sign : {-1.0, 1.0}) {
        const double mag = std::abs(transfer_function(sign * spec.omega, spec));
        CHECK(std::abs(mag / std::exp(-od) - 1.0) < 1e-10);
      }
    }
  }

  TEST_CASE("passivity on a dense detuning grid") {
    const Scenario s = scenarios::demo(1e-6);
    for (int n : {0, 1, 4}) {
      const TransferSpec spec = TransferSpec::for_sector(n, s.medium, s.cavity);
      double worst = 0.0;
      for (int i = 0; i < 10000; ++i) {
        const double d = -5.0 * spec.omega + 10.0 * spec.omega * i / 9999.0;
        worst = std::max(worst, std::abs(transfer_function(d, spec)));
      }
      CHECK(worst <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("phase slope at zero detuning is the total transit time") {
    const Scenario s = scenarios::demo(1e-6);
    for (int n : {0, 1, 2}) {
      const TransferSpec spec = TransferSpec::for_sector(n, s.medium, s.cavity);
      const double h = spec.omega * 1e-6;
      const double slope =
          -(std::arg(transfer_function(h, spec)) - std::arg(transfer_function(-h, spec))) / (2 * h);
      const double expected = spec.vacuum_transit() + transit_delay(n, s.medium, s.cavity);
      CHECK(slope == doctest::Approx(expected).epsilon(1e-6));
      CHECK(spec.medium_delay() ==
            doctest::Approx(transit_delay(n, s.medium, s.cavity)).epsilon(1e-12));
    }
  }

  TEST_CASE("sector transfer equals the classical drive at G sqrt(n+1)") {
    const Scenario s = scenarios::demo(1e-6);
    for (int n : {0, 3}) {
      const TransferSpec a = TransferSpec::for_sector(n, s.medium, s.cavity);
      const TransferSpec b = TransferSpec::with_drive(s.cavity.G * std::sqrt(n + 1.0), s.medium);
      for (double d : {-3e7, -1e6, 2e5, 4e7})
        CHECK(std::abs(transfer_function(d, a) - transfer_function(d, b)) < 1e-14);
    }
  }

  TEST_CASE("propagation is linear") {
    const Scenario s = scenarios::demo(1e-6);
    const SampledEnvelope x = sample_envelope(s);
    SampledEnvelope y = x;
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] = x[i] * std::polar(1.0, 1e5 * x.time(i));
    SampledEnvelope mix = x;
    const Complex a(0.3, -0.8), b(-1.1, 0.2);
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * x[i] + b * y[i];
    const TransferSpec spec = TransferSpec::for_sector(1, s.medium, s.cavity);
    const SampledEnvelope px = propagate(x, spec), py = propagate(y, spec), pm = propagate(mix, spec);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < pm.size(); ++i) {
      worst = std::max(worst, std::abs(pm[i] - (a * px[i] + b * py[i])));
      scale = std::max(scale, std::abs(pm[i]));
    }
    CHECK(worst < 1e-12 * scale);
  }

  TEST_CASE("a vanishing medium length is the identity") {
    Scenario s = scenarios::demo(1e-6);
    s.medium = from_macroscopic(400.0, 3e6, 0.01, 1e6);
    const SampledEnvelope in = sample_envelope(s);
    MediumSpec thin = s.medium;
    thin.length = 1e-15;
    const SampledEnvelope out = propagate(in, TransferSpec::for_sector(1, thin, s.cavity));
    double worst = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) {
      worst = std::max(worst, std::abs(out[i] - in[i]));
      peak = std::max(peak, std::abs(in[i]));
    }
    CHECK(worst < 1e-9 * peak);
  }

  TEST_CASE("narrowband delays match the closed form") {
    Scenario s = scenarios::demo(1.0);
    s.pulse = s.pulse.with_duration(20.0 / window0(s));
    for (int n : {0, 1, 2}) {
      const Measured m = run(s, n);
      CHECK(std::abs(m.delay / transit_delay(n, s.medium, s.cavity) - 1.0) < 0.01);
      CHECK(m.transmission > 0.99);
    }
    const double split = run(s, 0).delay - run(s, 1).delay;
    CHECK(std::abs(split / differential_delay(0, s.medium, s.cavity) - 1.0) < 0.01);
  }

  TEST_CASE("transmission agrees with the quadrature oracle in the broadband regime") {
    Scenario s = scenarios::demo(1.0);
    s.pulse = s.pulse.with_duration(0.5 / window0(s));
    const Measured m = run(s, 0);
    const double expected =
        oracle::gaussian_transmission(s.pulse.duration(), s.medium.collective_coupling_sq(),
                                      s.medium.length, s.medium.gamma, s.cavity.G, s.medium.c);
    CHECK(m.transmission < 0.7);
    CHECK(m.transmission == doctest::Approx(expected).epsilon(1e-4));
  }

  TEST_CASE("a carrier on the absorption doublet is extinguished") {
    Scenario s = scenarios::demo(1e-5);
    s.medium = from_macroscopic(1.0, 3e6, 0.01, 1e6);
    PropagateOptions options;
    const TransferSpec spec = TransferSpec::for_sector(1, s.medium, s.cavity);
    options.carrier_offset = spec.omega;
    const Measured m = run(s, 1, options);
    const double expected = oracle::gaussian_transmission(
        s.pulse.duration(), s.medium.collective_coupling_sq(), s.medium.length, s.medium.gamma,
        spec.omega, s.medium.c, spec.omega);
    CHECK(m.transmission == doctest::Approx(expected).epsilon(1e-4));
    CHECK(m.transmission == doctest::Approx(std::exp(-2.0)).epsilon(0.01));
  }

  TEST_CASE("narrowing the spectrum improves delay accuracy and transmission") {
    Scenario s = scenarios::demo(1.0);
    double previous_error = 1.0, previous_transmission = 0.0;
    for (double product : {5.0, 10.0, 20.0, 40.0}) {
      s.pulse = s.pulse.with_duration(product / window0(s));
      const Measured m = run(s, 1);
      const double error = std::abs(m.delay / transit_delay(1, s.medium, s.cavity) - 1.0);
      CHECK(error < previous_error);
      CHECK(m.transmission > previous_transmission);
      previous_error = error;
      previous_transmission = m.transmission;
    }
  }

  TEST_CASE("undersampled input is rejected as aliasing") {
    Scenario s = scenarios::demo(1e-6);
    s.numerics.samples_per_duration = 1.0;
    try {
      run(s, 1);
      FAIL("expected aliasing");
    } catch (const NumericalError& e) {
      CHECK(e.kind() == "aliasing");
    }
  }

  TEST_CASE("a delay longer than the window is rejected") {
    const Scenario s = scenarios::demo(1e-6);
    std::vector<Complex> samples(256);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double t = -8e-6 + 6.25e-8 * static_cast<double>(i);
      samples[i] = std::exp(-0.5 * t * t / 1e-12);
    }
    const SampledEnvelope in(-8e-6, 6.25e-8, samples);
    try {
      propagate(in, TransferSpec::for_sector(0, s.medium, s.cavity));
      FAIL("expected padding overflow");
    } catch (const NumericalError& e) {
      CHECK(e.kind() == "padding-overflow");
    }
  }

  TEST_CASE("time grid honours sampling and padding") {
    const Scenario s = scenarios::demo(1e-6);
    const TimeGrid g = plan_time_grid(s);
    CHECK(g.dt == doctest::Approx(1e-6 / 32.0));
    CHECK(is_power_of_two(g.size));
    const double tau = transit_delay(0, s.medium, s.cavity);
    CHECK(g.dt * static_cast<double>(g.size) >= 4.0 * std::max(16e-6, 2.0 * (tau + 1e-6)));
    CHECK(sample_envelope(s).energy() == doctest::Approx(1.0).epsilon(1e-9));
  }
}
