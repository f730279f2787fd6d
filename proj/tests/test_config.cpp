#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "hmf/config.hpp"
#include "hmf/errors.hpp"

using namespace hmf;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.ini");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults") {
  const RunConfig c;
  CHECK(c.surface.tube_radius == 0.1);
  CHECK(c.surface.tube_half_height == 5.0);
  CHECK(c.surface.epsilon == 0.05);
  CHECK(c.surface.genus_parameter == 1);
  CHECK(c.surface.resolution == 2);
  CHECK_FALSE(c.flow.dt.has_value());
  CHECK(c.flow.max_steps == 100000);
  CHECK(c.flow.tension_tol == 1e-4);
  CHECK(c.region_arc_count() == 3);
  CHECK(c.checks == CheckSet::All);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("parse sections") {
  const RunConfig c = parse(
      "[surface]\ntube_radius = 0.05\ngenus_parameter = 2\n"
      "[flow]\ndt = 1e-4\nmax_steps = 10\ndeterministic_reduction = false\n"
      "[region]\nphase = 0.1\n"
      "[run]\nchecks = region-only\noutput_dir = out/x\nseed = 9\n"
      "[checks]\ngreat_circles = 50\n");
  CHECK(c.surface.tube_radius == 0.05);
  CHECK(c.surface.genus_parameter == 2);
  CHECK(c.region_arc_count() == 5);
  REQUIRE(c.flow.dt.has_value());
  CHECK(*c.flow.dt == 1e-4);
  CHECK(c.flow.max_steps == 10);
  CHECK_FALSE(c.flow.deterministic_reduction);
  CHECK(c.arc_phase == 0.1);
  CHECK(c.checks == CheckSet::RegionOnly);
  CHECK(c.output_dir == "out/x");
  CHECK(c.seed == 9);
  CHECK(c.great_circles == 50);
  CHECK_FALSE(parse("[flow]\ndt = auto\n").flow.dt.has_value());
}

TEST_CASE("parse errors name the line or the field") {
  const std::string syntax = error_of("[surface]\ntube_radius = 0.1\n[broken\n");
  CHECK(syntax.find("test.ini:3") != std::string::npos);

  const std::string unknown = error_of("[surface]\ntube_radius = 0.1\nbogus = 1\n");
  CHECK(unknown.find("surface.bogus") != std::string::npos);

  const std::string bad_value = error_of("[flow]\nmax_steps = many\n");
  CHECK(bad_value.find("flow.max_steps") != std::string::npos);
  CHECK(bad_value.find("many") != std::string::npos);

  const std::string trailing = error_of("[surface]\ntube_radius = 0.1x\n");
  CHECK(trailing.find("surface.tube_radius") != std::string::npos);

  CHECK(error_of("[run]\nchecks = some\n").find("run.checks") != std::string::npos);
  CHECK(error_of("[flow]\ndeterministic_reduction = maybe\n").find("flow.deterministic_reduction") !=
        std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/file.ini"), ConfigError);
}

TEST_CASE("validation rejects out-of-range parameters") {
  RunConfig c;
  c.surface.tube_radius = 2.0;
  try {
    c.validate();
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("tube_radius") != std::string::npos);
  }
  c = {};
  c.flow.dt_safety = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.sweepout_radius = 2.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.courant_lebesgue_delta = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("environment overrides") {
  CHECK(env_name("surface.tube_radius") == "HMF_SURFACE_TUBE_RADIUS");
  CHECK(env_name("flow.dt") == "HMF_FLOW_DT");
  std::map<std::string, std::string> env{{"HMF_SURFACE_TUBE_RADIUS", "0.07"}, {"HMF_RUN_CHECKS", "flow-only"}};
  auto lookup = [&](const char* name) -> const char* {
    const auto it = env.find(name);
    return it == env.end() ? nullptr : it->second.c_str();
  };
  RunConfig c = parse("[surface]\ntube_radius = 0.05\nresolution = 1\n");
  apply_env_overrides(c, lookup);
  CHECK(c.surface.tube_radius == 0.07);
  CHECK(c.surface.resolution == 1);
  CHECK(c.checks == CheckSet::FlowOnly);

  env["HMF_FLOW_MAX_STEPS"] = "ten";
  try {
    apply_env_overrides(c, lookup);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("HMF_FLOW_MAX_STEPS") != std::string::npos);
  }
}

TEST_CASE("INI round trip") {
  RunConfig c;
  c.surface.tube_radius = 0.123456789012345;
  c.flow.dt = 3e-4;
  c.checks = CheckSet::FlowOnly;
  c.great_circles = 77;
  const RunConfig back = parse(to_ini(c));
  for (const auto& key : config_keys()) {
    CAPTURE(key);
    CHECK(get_config_value(back, key) == get_config_value(c, key));
  }
  CHECK(back.surface.tube_radius == c.surface.tube_radius);
}

TEST_CASE("check sets") {
  CHECK(parse_check_set("all") == CheckSet::All);
  CHECK(parse_check_set("region-only") == CheckSet::RegionOnly);
  CHECK(parse_check_set("flow-only") == CheckSet::FlowOnly);
  CHECK(to_string(CheckSet::RegionOnly) == "region-only");
  CHECK_THROWS_AS(parse_check_set("none"), ConfigError);
}

TEST_CASE("setting and reading single keys") {
  RunConfig c;
  set_config_value(c, "checks.trace_step", "0.002");
  CHECK(c.trace_step == 0.002);
  CHECK_THROWS_AS(set_config_value(c, "nope", "1"), ConfigError);
  CHECK_THROWS_AS(get_config_value(c, "surface.nope"), ConfigError);
  CHECK(get_config_value(c, "flow.dt") == "auto");
}
