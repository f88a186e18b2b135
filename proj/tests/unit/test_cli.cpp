#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli/app.hpp"

namespace fs = std::filesystem;
using fockdelay::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) {
  return (fs::path(FOCKDELAY_SOURCE_DIR) / "configs" / name).string();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fockdelay_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("io-cli") {
  TEST_CASE("help and preset listing succeed") {
    CHECK(call({"--help"}).code == 0);
    const Result r = call({"presets"});
    CHECK(r.code == 0);
    CHECK(r.out.find("demo-feasible") != std::string::npos);
    CHECK(r.out.find("paper-2009") != std::string::npos);
  }

  TEST_CASE("delay report as json") {
    const Result r = call({"delay", "--preset", "paper-2009", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema_version"] == 1);
    CHECK(j["command"] == "delay");
    CHECK(j["results"]["tau"][1].get<double>() == doctest::Approx(150e-9).epsilon(1e-12));
    CHECK(j["config"].get<std::string>().find("[medium]") != std::string::npos);
  }

  TEST_CASE("feasibility verdicts for the presets") {
    const auto reference = nlohmann::json::parse(call({"feasibility", "--preset", "paper-2009", "--json"}).out);
    CHECK(reference["results"]["verdict"] == "marginal");
    const Result demo = call({"feasibility", "--config", config("demo.cfg")});
    CHECK(demo.code == 0);
    CHECK(demo.out.find("satisfied") != std::string::npos);
  }

  TEST_CASE("invalid input exits with 1") {
    CHECK(call({"delay", "--preset", "nowhere"}).code == 1);
    CHECK(call({"delay", "--bogus-flag"}).code == 1);
    CHECK(call({}).code == 1);
    CHECK(call({"delay", "--config", "/nonexistent/file.cfg"}).code == 1);
    const fs::path dir = scratch_dir("bad_config");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.cfg") << "preset = demo-feasible\n[pulse]\nT = 1e-6\n";
    const Result r = call({"delay", "--config", (dir / "bad.cfg").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("line 3") != std::string::npos);
    fs::remove_all(dir);
  }

  TEST_CASE("numerical failure exits with 2") {
    const Result r =
        call({"propagate", "--config", config("demo-aliasing.cfg"), "--sector", "1", "--engine", "spectral"});
    CHECK(r.code == 2);
    CHECK(r.err.find("aliasing") != std::string::npos);
  }

  TEST_CASE("propagate writes its envelopes") {
    const fs::path dir = scratch_dir("propagate");
    const Result r = call({"propagate", "--preset", "demo-feasible", "--sector", "1", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "input.csv"));
    CHECK(fs::exists(dir / "output.csv"));
    std::ifstream report(dir / "propagate.json");
    const auto j = nlohmann::json::parse(report);
    CHECK(j["results"]["transmission"].get<double>() > 0.9);
    fs::remove_all(dir);
  }

  TEST_CASE("strict success floor reports an infeasible gate") {
    const Result r = call({"filter", "--preset", "demo-feasible", "--s-min", "0.99", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["results"]["gate"]["feasible"] == false);
    CHECK_FALSE(j["warnings"].empty());
  }

  TEST_CASE("sweep streams csv and is reproducible") {
    const std::vector<std::string> args = {"sweep", "--config", config("od-sweep.cfg"), "--quiet"};
    const Result a = call(args);
    REQUIRE(a.code == 0);
    CHECK(a.out.rfind("OD,tau_0", 0) == 0);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 17);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    CHECK(call(threaded).out == a.out);
    CHECK(call({"sweep", "--preset", "demo-feasible", "--axis", "OD:log:10:1000:3", "--quiet"}).code == 0);
    CHECK(call({"sweep", "--preset", "demo-feasible", "--axis", "OD:cubic:10:1000:3"}).code == 1);
  }
}
