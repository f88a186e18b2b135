#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "../support/scenarios.hpp"
#include "fockdelay/analytic.hpp"
#include "fockdelay/errors.hpp"
#include "fockdelay/fock.hpp"

using namespace fockdelay;

namespace {

// Demo medium with a balanced |1>,|2> probe whose duration puts
// delta tau_1 / T at the requested ratio.
Scenario balanced(double ratio) {
  Scenario s = scenarios::demo(1e-6);
  const double T = differential_delay(1, s.medium, s.cavity) / ratio;
  s.pulse = ProbePulse(EnvelopeShape::gaussian, T, scenarios::balanced_pair());
  return s;
}

double lab_delay(const Scenario& s, int n) {
  return transit_delay(n, s.medium, s.cavity) + s.medium.length / s.medium.c;
}

}  // namespace

TEST_SUITE("fock-assembly") {
  TEST_CASE("engine names") {
    CHECK(to_string(Engine::time_domain) == "time-domain");
    CHECK(engine_from_string("td") == Engine::time_domain);
    CHECK(engine_from_string("spectral") == Engine::spectral);
    CHECK_THROWS_AS(engine_from_string("magic"), ValidationError);
  }

  TEST_CASE("analytic engine shifts each component rigidly") {
    const Scenario s = balanced(2.0);
    const OutputState out = assemble(s, Engine::analytic);
    REQUIRE(out.components.size() == 3);
    CHECK(out.component(0).empty());
    CHECK(out.vacuum_weight() == 0.0);
    for (int n : {1, 2}) {
      const auto& c = out.component(n);
      CHECK(c.n == n);
      CHECK(std::norm(c.amplitude) == doctest::Approx(0.5));
      CHECK(c.norm == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(c.delay == doctest::Approx(transit_delay(n, s.medium, s.cavity)).epsilon(1e-9));
      CHECK(c.envelope.centroid() == doctest::Approx(lab_delay(s, n)).epsilon(1e-9));
    }
    CHECK(out.component(1).delay - out.component(2).delay ==
          doctest::Approx(2.0 * s.pulse.duration()).epsilon(1e-9));
  }

  TEST_CASE("a pure one-photon input has one component") {
    const Scenario s = scenarios::demo(1e-6);
    const OutputState out = assemble(s, Engine::analytic);
    CHECK_FALSE(out.component(1).empty());
    CHECK(out.component(2).empty());
    const GateMetrics m = optimize_gate(out);
    CHECK(m.feasible);
    CHECK(m.purity == 1.0);
    CHECK(m.contamination == 0.0);
  }

  TEST_CASE("vacuum amplitude is carried but not propagated") {
    Scenario s = scenarios::demo(1e-6);
    const double h = 1.0 / std::sqrt(2.0);
    s.pulse = ProbePulse(EnvelopeShape::gaussian, 1e-6, {h, h});
    const OutputState out = assemble(s, Engine::analytic);
    CHECK(out.component(0).empty());
    CHECK(out.vacuum_weight() == doctest::Approx(0.5));
    CHECK(optimize_gate(out).vacuum_weight == doctest::Approx(0.5));
  }

  TEST_CASE("overlap of shifted Gaussians") {
    const OutputState out = assemble(balanced(2.0), Engine::analytic);
    CHECK(pairwise_overlap(out, 1, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    CHECK(pairwise_overlap(out, 1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(pairwise_overlap(out, 0, 1), ValidationError);
    for (double ratio : {0.5, 1.0, 4.0}) {
      const OutputState o = assemble(balanced(ratio), Engine::analytic);
      CHECK(pairwise_overlap(o, 1, 2) == doctest::Approx(oracle::gaussian_overlap(ratio, 1.0)).epsilon(1e-6));
    }
  }

  TEST_CASE("gate metrics match the error-function oracle") {
    for (double ratio : {0.5, 4.0}) {
      Scenario s = balanced(ratio);
      s.numerics.samples_per_duration = 256.0;
      const double T = s.pulse.duration();
      const OutputState out = assemble(s, Engine::analytic);
      const double t1 = lab_delay(s, 1), t2 = lab_delay(s, 2);
      const GateWindow w{t1 - T, t1 + T};
      const GateMetrics m = gate_metrics(out, w);
      CHECK(m.success == doctest::Approx(oracle::gaussian_capture(w.start, w.end, t1, T)).epsilon(1e-5));
      CHECK(m.yield == doctest::Approx(0.5 * m.success).epsilon(1e-12));
      CHECK(m.contamination ==
            doctest::Approx(0.5 * oracle::gaussian_capture(w.start, w.end, t2, T)).epsilon(1e-5));
      CHECK(m.purity == doctest::Approx(oracle::gaussian_purity(w.start, w.end, t1, t2, T)).epsilon(1e-5));
    }
  }

  TEST_CASE("optimal gate separates well-resolved components") {
    const GateMetrics wide = optimize_gate(assemble(balanced(4.0), Engine::analytic));
    CHECK(wide.feasible);
    CHECK(wide.purity > 0.99);
    CHECK(wide.success > 0.9);
    const GateMetrics narrow = optimize_gate(assemble(balanced(0.5), Engine::analytic));
    CHECK(narrow.purity < 0.8);
  }

  TEST_CASE("optimal purity rises with the separation ratio") {
    double previous = 0.0;
    for (double ratio : {0.5, 1.0, 2.0, 4.0}) {
      const GateMetrics m = optimize_gate(assemble(balanced(ratio), Engine::analytic));
      CHECK(m.purity > previous);
      previous = m.purity;
    }
  }

  TEST_CASE("gate metrics depend on the ratio alone") {
    const Scenario a = balanced(2.0);
    Scenario b = a;
    b.cavity.G /= std::sqrt(2.0);
    b.pulse = b.pulse.with_duration(2.0 * a.pulse.duration());
    const GateMetrics ma = optimize_gate(assemble(a, Engine::analytic));
    const GateMetrics mb = optimize_gate(assemble(b, Engine::analytic));
    CHECK(mb.purity == doctest::Approx(ma.purity).epsilon(1e-4));
    CHECK(mb.success == doctest::Approx(ma.success).epsilon(1e-4));
  }

  TEST_CASE("the full window collects everything and cannot filter") {
    const OutputState out = assemble(balanced(4.0), Engine::analytic);
    const auto& env = out.component(1).envelope;
    const GateMetrics m = gate_metrics(out, {env.t0(), env.time(env.size() - 1)});
    CHECK(m.success == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.purity == doctest::Approx(0.5).epsilon(1e-9));
    CHECK_THROWS_AS(gate_metrics(out, {1.0, 0.5}), ValidationError);
    CHECK_THROWS_AS(gate_metrics(out, {env.t0() - 1.0, env.t0()}), ValidationError);
  }

  TEST_CASE("success grows with the window") {
    const OutputState out = assemble(balanced(1.0), Engine::analytic);
    const double t1 = out.component(1).envelope.centroid();
    const double T = 1e-6;
    double previous = -1.0;
    for (double half = 0.1; half < 6.0; half += 0.1) {
      const double s = gate_metrics(out, {t1 - half * T, t1 + half * T}).success;
      CHECK(s >= previous);
      previous = s;
    }
  }

  TEST_CASE("a lossy one-photon channel cannot meet a strict success floor") {
    Scenario s = scenarios::demo(1e-6);
    s.pulse = ProbePulse(EnvelopeShape::gaussian, 1e-6, scenarios::balanced_pair());
    const OutputState out = assemble(s, Engine::spectral);
    CHECK(out.component(1).norm < 0.99);
    GateSearch strict;
    strict.min_success = 0.99;
    const GateMetrics m = optimize_gate(out, strict);
    CHECK_FALSE(m.feasible);
    CHECK(optimize_gate(out).feasible);
    strict.min_success = 1.5;
    CHECK_THROWS_AS(optimize_gate(out, strict), ValidationError);
  }

  TEST_CASE("spectral and analytic engines agree in the narrowband limit") {
    Scenario s = scenarios::demo(1e-6);
    const double T = 20.0 / transparency_window(0, s.medium, s.cavity).corrected_form;
    s.pulse = ProbePulse(EnvelopeShape::gaussian, T, scenarios::balanced_pair());
    const OutputState a = assemble(s, Engine::analytic);
    const OutputState b = assemble(s, Engine::spectral);
    for (int n : {1, 2})
      CHECK(std::abs(b.component(n).delay / a.component(n).delay - 1.0) < 0.01);
    const double t1 = lab_delay(s, 1);
    const GateWindow w{t1 - T, t1 + T};
    CHECK(std::abs(gate_metrics(b, w).success / gate_metrics(a, w).success - 1.0) < 0.01);
    CHECK(std::abs(gate_metrics(b, w).purity / gate_metrics(a, w).purity - 1.0) < 0.01);
  }

  TEST_CASE("time-domain engine assembles on a shared grid") {
    Scenario s = scenarios::demo(1e-6);
    s.numerics.z_points = 128;
    s.pulse = ProbePulse(EnvelopeShape::gaussian, 1e-6, scenarios::balanced_pair());
    const OutputState td = assemble(s, Engine::time_domain);
    const OutputState sp = assemble(s, Engine::spectral);
    CHECK(td.component(1).envelope.t0() == td.component(2).envelope.t0());
    for (int n : {1, 2})
      CHECK(td.component(n).delay == doctest::Approx(sp.component(n).delay).epsilon(1e-3));
  }

  TEST_CASE("sector failures name the sector") {
    Scenario s = scenarios::demo(1e-6);
    s.numerics.samples_per_duration = 1.0;
    s.pulse = ProbePulse(EnvelopeShape::gaussian, 1e-6, scenarios::balanced_pair());
    try {
      assemble(s, Engine::spectral);
      FAIL("expected a numerical error");
    } catch (const NumericalError& e) {
      CHECK(e.kind() == "aliasing");
      CHECK(std::string(e.what()).find("sector 1") != std::string::npos);
    }
  }
}
