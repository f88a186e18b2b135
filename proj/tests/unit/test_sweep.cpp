#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "../support/scenarios.hpp"
#include "fockdelay/analytic.hpp"
#include "fockdelay/config.hpp"
#include "fockdelay/errors.hpp"
#include "fockdelay/sweep.hpp"

using namespace fockdelay;

namespace {

std::size_t column(const SweepTable& t, const std::string& name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  REQUIRE(it != t.columns.end());
  return static_cast<std::size_t>(it - t.columns.begin());
}

double number(const SweepRow& row, std::size_t i) { return std::get<double>(row.cells.at(i)); }
const std::string& text(const SweepRow& row, std::size_t i) {
  return std::get<std::string>(row.cells.at(i));
}

std::string csv(const SweepTable& t) {
  std::ostringstream out;
  write_sweep_csv(out, t);
  return out.str();
}

}  // namespace

TEST_SUITE("sweep-engine") {
  TEST_CASE("axis values hit their end points exactly") {
    const SweepAxis log{SweepParameter::OD, 10.0, 1000.0, 3, Spacing::log};
    CHECK(log.values() == std::vector<double>{10.0, 100.0, 1000.0});
    const SweepAxis lin{SweepParameter::G, 1e6, 2e6, 5, Spacing::linear};
    const auto v = lin.values();
    CHECK(v.front() == 1e6);
    CHECK(v.back() == 2e6);
    CHECK(v[2] == doctest::Approx(1.5e6));
    const SweepAxis parsed = parse_axis_spec("OD:log:10:1000:16");
    CHECK(parsed.parameter == SweepParameter::OD);
    CHECK(parsed.spacing == Spacing::log);
    CHECK(parsed.count == 16);
    CHECK_THROWS_AS(parse_axis_spec("OD:cubic:10:1000:16"), ValidationError);
  }

  TEST_CASE("separation ratio increases strictly with optical depth") {
    SweepPlan plan;
    plan.axes = {{SweepParameter::OD, 10.0, 1000.0, 16, Spacing::log}};
    const SweepTable t = run_sweep(scenarios::demo(1e-6), plan);
    REQUIRE(t.rows.size() == 16);
    const std::size_t ratio = column(t, "dtau1_over_T");
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
      CHECK(t.rows[i].error.empty());
      CHECK(number(t.rows[i], ratio) > number(t.rows[i - 1], ratio));
    }
  }

  TEST_CASE("coupling and duration map contains the feasible demo point") {
    SweepPlan plan;
    plan.axes = {{SweepParameter::G, 1e6, 1e8, 5, Spacing::log},
                 {SweepParameter::T, 1e-7, 1e-5, 5, Spacing::log}};
    const SweepTable t = run_sweep(preset("demo-feasible").scenario, plan);
    CHECK(t.axis_names == std::vector<std::string>{"G", "T"});
    REQUIRE(t.rows.size() == 25);
    const std::size_t verdict = column(t, "verdict");
    int satisfied = 0;
    bool demo_found = false;
    for (const auto& row : t.rows) {
      if (text(row, verdict) == "satisfied") ++satisfied;
      if (row.coordinates[0] == 1e7 && row.coordinates[1] == doctest::Approx(1e-6).epsilon(1e-14)) {
        demo_found = true;
        CHECK(text(row, verdict) == "satisfied");
      }
    }
    CHECK(demo_found);
    CHECK(satisfied >= 1);
    CHECK(satisfied < 25);
  }

  TEST_CASE("grid order puts the first axis slowest") {
    SweepPlan plan;
    plan.axes = {{SweepParameter::G, 1e6, 2e6, 2, Spacing::linear},
                 {SweepParameter::T, 1e-6, 3e-6, 3, Spacing::linear}};
    const SweepTable t = run_sweep(scenarios::demo(1e-6), plan);
    REQUIRE(t.rows.size() == 6);
    CHECK(t.rows[0].coordinates == std::vector<double>{1e6, 1e-6});
    CHECK(t.rows[2].coordinates == std::vector<double>{1e6, 3e-6});
    CHECK(t.rows[3].coordinates == std::vector<double>{2e6, 1e-6});
  }

  TEST_CASE("optical depth axis rebuilds the medium") {
    const Scenario base = scenarios::demo(1e-6);
    const std::vector<SweepAxis> axes = {{SweepParameter::OD, 10.0, 100.0, 2, Spacing::log}};
    const Scenario s = apply_point(base, axes, {50.0});
    CHECK(derive(s.medium).optical_depth == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(s.medium.atoms == base.medium.atoms);
    CHECK(s.medium.length == base.medium.length);
  }

  TEST_CASE("grid caps depend on the engine") {
    SweepPlan plan;
    plan.engine = Engine::spectral;
    plan.axes = {{SweepParameter::OD, 10.0, 1000.0, 1001, Spacing::log}};
    CHECK_THROWS_AS(plan.validate(), ValidationError);
    plan.engine = Engine::analytic;
    CHECK_NOTHROW(plan.validate());
    plan.engine = Engine::time_domain;
    plan.axes[0].count = 101;
    CHECK_THROWS_AS(plan.validate(), ValidationError);
    CHECK(sweep_point_cap(Engine::analytic) > sweep_point_cap(Engine::spectral));
    plan.metrics = {"delays", "colour"};
    plan.axes[0].count = 2;
    CHECK_THROWS_AS(plan.validate(), ValidationError);
  }

  TEST_CASE("a failing point is recorded without aborting the sweep") {
    Scenario base = scenarios::demo(1e-6);
    base.pulse = ProbePulse(EnvelopeShape::gaussian, 1e-6, scenarios::balanced_pair());
    SweepPlan plan;
    plan.axes = {{SweepParameter::n_max, 1.0, 3.0, 3, Spacing::linear}};
    const SweepTable t = run_sweep(base, plan);
    REQUIRE(t.rows.size() == 3);
    CHECK_FALSE(t.rows[0].error.empty());
    CHECK(t.rows[1].error.empty());
    CHECK(t.rows[2].error.empty());
    const std::string out = csv(t);
    CHECK(out.find("n_max") == 0);
  }

  TEST_CASE("serial and parallel runs give identical bytes") {
    Scenario base = scenarios::demo(1e-6);
    base.pulse = ProbePulse(EnvelopeShape::gaussian, 1e-6, scenarios::balanced_pair());
    SweepPlan plan;
    plan.engine = Engine::spectral;
    plan.metrics = {"delays", "feasibility", "propagation", "gate"};
    plan.gate.start_points = 64;
    plan.gate.width_points = 64;
    plan.axes = {{SweepParameter::OD, 100.0, 800.0, 4, Spacing::log},
                 {SweepParameter::T, 5e-7, 2e-6, 3, Spacing::log}};
    plan.threads = 1;
    const std::string serial = csv(run_sweep(base, plan));
    plan.threads = 4;
    std::size_t last_done = 0;
    const SweepTable parallel = run_sweep(base, plan, [&](std::size_t done, std::size_t total) {
      CHECK(total == 12);
      CHECK(done > last_done);
      last_done = done;
    });
    CHECK(last_done == 12);
    CHECK(csv(parallel) == serial);
    CHECK(csv(run_sweep(base, plan)) == serial);
  }

  TEST_CASE("json lines carry one object per row") {
    SweepPlan plan;
    plan.axes = {{SweepParameter::OD, 10.0, 1000.0, 3, Spacing::log}};
    const SweepTable t = run_sweep(scenarios::demo(1e-6), plan);
    std::ostringstream out;
    write_sweep_jsonl(out, t);
    const std::string s = out.str();
    CHECK(std::count(s.begin(), s.end(), '\n') == 3);
    CHECK(s.find("\"OD\":10") != std::string::npos);
    CHECK(s.find("\"verdict\"") != std::string::npos);
  }
}
