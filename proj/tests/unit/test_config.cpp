#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fockdelay/analytic.hpp"
#include "fockdelay/config.hpp"
#include "fockdelay/errors.hpp"

using namespace fockdelay;

namespace {

bool mentions(const ConfigError& e, int line, const std::string& fragment) {
  for (const auto& issue : e.issues())
    if (issue.line == line && issue.message.find(fragment) != std::string::npos) return true;
  return false;
}

ConfigError expect_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a config error");
  return ConfigError({});
}

const char* kExplicit = R"(
[medium]
OD = 400
N = 1e6
L = 1 cm
Gamma = 3 MHz
[cavity]
G = 10 MHz
kappa = 10 kHz
[pulse]
T = 1 us
amplitudes = 0, 0.7071067811865476, 0.7071067811865476
)";

}  // namespace

TEST_SUITE("io-cli") {
  TEST_CASE("presets load and are valid") {
    CHECK(preset_names().size() >= 2);
    for (const auto& name : preset_names()) {
      const RunConfig c = preset(name);
      CHECK(c.preset == name);
      CHECK_NOTHROW(c.scenario.validate());
      CHECK_FALSE(preset_summary(name).empty());
    }
    const RunConfig reference = preset("paper-2009");
    CHECK(derive(reference.scenario.medium).optical_depth == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(reference.scenario.cavity.G == 1e7);
    CHECK(reference.scenario.medium.gamma == 3e6);
    CHECK(reference.scenario.pulse.duration() == doctest::Approx(1e-7).epsilon(1e-15));
    CHECK_THROWS_AS(preset("nonexistent"), ValidationError);
  }

  TEST_CASE("explicit config matches the demo preset") {
    const RunConfig c = parse_config_text(kExplicit);
    const RunConfig demo = preset("demo-feasible");
    CHECK(derive(c.scenario.medium).optical_depth == doctest::Approx(400.0).epsilon(1e-12));
    CHECK(c.scenario.pulse.duration() == 1e-6);
    CHECK(c.scenario.cavity == demo.scenario.cavity);
    CHECK(c.scenario.medium.length == 0.01);
  }

  TEST_CASE("preset values can be overridden") {
    const RunConfig c = parse_config_text("preset = demo-feasible\n[pulse]\nT = 2 us\n");
    CHECK(c.preset == "demo-feasible");
    CHECK(c.scenario.pulse.duration() == 2e-6);
    CHECK(c.scenario.cavity.G == 1e7);
  }

  TEST_CASE("dimensional values need a unit") {
    const ConfigError e = expect_error("preset = demo-feasible\n[pulse]\nT = 1e-6\n");
    CHECK(mentions(e, 3, "unit"));
    CHECK(e.field() == "config");
  }

  TEST_CASE("every problem is reported at once") {
    const ConfigError e = expect_error(
        "preset = demo-feasible\n[cavity]\nG = 10 parsecs\ncolour = blue\n[pulse]\nT = -1 us\n");
    CHECK(e.issues().size() >= 3);
    CHECK(mentions(e, 3, ""));
    CHECK(mentions(e, 4, "colour"));
    CHECK(mentions(e, 6, ""));
  }

  TEST_CASE("unknown sections, duplicates and missing values are errors") {
    CHECK(mentions(expect_error("[optics]\nx = 1\n"), 1, "optics"));
    CHECK(mentions(expect_error("preset = demo-feasible\n[pulse]\nT = 1 us\nT = 2 us\n"), 4, "T"));
    const ConfigError missing = expect_error("[medium]\nOD = 10\n");
    CHECK(missing.issues().size() >= 3);
    CHECK(mentions(expect_error("preset = demo-feasible\n[cavity]\nG\n"), 3, ""));
  }

  TEST_CASE("cyclic convention scales rates by two pi") {
    const RunConfig c = parse_config_text(
        "preset = demo-feasible\n[numerics]\nrate_convention = cyclic\n[cavity]\nG = 1 MHz\n");
    CHECK(c.scenario.cavity.G == doctest::Approx(2.0 * kPi * 1e6).epsilon(1e-15));
    const RunConfig a = parse_config_text("preset = demo-feasible\n[cavity]\nG = 1 Mrad/s\n");
    CHECK(a.scenario.cavity.G == 1e6);
  }

  TEST_CASE("units convert exactly") {
    const RunConfig c = parse_config_text(
        "preset = demo-feasible\n[pulse]\nT = 100 ns\n[medium]\nL = 25 mm\n");
    CHECK(c.scenario.pulse.duration() == 100.0 / 1e9);
    CHECK(c.scenario.medium.length == 25.0 / 1e3);
  }

  TEST_CASE("amplitudes are normalized only on request") {
    const std::string base = "preset = demo-feasible\n[pulse]\namplitudes = 0, 1, 1\n";
    CHECK_THROWS_AS(parse_config_text(base), ValidationError);
    const RunConfig c = parse_config_text(base + "normalize = true\n");
    CHECK(c.scenario.pulse.weight(1) == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("sweep and run sections") {
    const RunConfig c = parse_config_text(
        "preset = demo-feasible\n[sweep]\naxis = T log 100 ns 10 us 9\naxis = OD log 10 1000 16\n"
        "engine = spectral\nmetrics = delays, gate\nthreads = 2\n[run]\nengine = time-domain\n"
        "mode = dynamic\nsector = 2\n");
    REQUIRE(c.sweep.axes.size() == 2);
    CHECK(c.sweep.axes[0].parameter == SweepParameter::T);
    CHECK(c.sweep.axes[0].min == 100.0 / 1e9);
    CHECK(c.sweep.axes[0].max == 10.0 / 1e6);
    CHECK(c.sweep.axes[1].count == 16);
    CHECK(c.sweep.engine == Engine::spectral);
    CHECK(c.sweep.threads == 2);
    CHECK(c.run.engine == Engine::time_domain);
    CHECK(c.run.mode == SolveMode::dynamic_filling);
    CHECK(c.run.sector == 2);
  }

  TEST_CASE("echo round trip is lossless") {
    for (const auto& name : preset_names()) {
      const RunConfig c = preset(name);
      CHECK(parse_config_text(echo_config(c)) == c);
    }
    RunConfig custom = parse_config_text(std::string(kExplicit) +
                                         "[sweep]\naxis = G log 1 Mrad/s 100 Mrad/s 5\n");
    CHECK(parse_config_text(echo_config(custom)) == custom);
    RunConfig synthetic = parse_config_text("preset = paper-2009\n[medium]\nN = synthetic\n");
    CHECK(synthetic.scenario.medium.synthetic_atoms);
    CHECK(parse_config_text(echo_config(synthetic)) == synthetic);
  }

  TEST_CASE("custom envelope samples resolve relative to the config") {
    const auto dir = std::filesystem::temp_directory_path() / "fockdelay_config_test";
    std::filesystem::create_directories(dir);
    {
      std::ofstream csv(dir / "pulse.csv");
      csv << "t_seconds,re,im\n";
      for (int i = 0; i < 64; ++i) {
        const double t = (i - 32) * 1e-7;
        csv << t << "," << std::exp(-0.5 * t * t / 1e-12) / std::pow(kPi * 1e-12, 0.25) << ",0\n";
      }
      std::ofstream cfg(dir / "run.cfg");
      cfg << "preset = demo-feasible\n[pulse]\nshape = custom\nsamples = pulse.csv\n";
    }
    const RunConfig c = load_config(dir / "run.cfg");
    CHECK(c.scenario.pulse.shape() == EnvelopeShape::custom);
    REQUIRE(c.scenario.pulse.custom_samples() != nullptr);
    CHECK(c.scenario.pulse.custom_samples()->size() == 64);
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_config(dir / "run.cfg"), ValidationError);
  }
}
