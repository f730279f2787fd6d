#include "hmf/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hmf/errors.hpp"

namespace hmf {
namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
  throw ConfigError("field " + key + ": expected " + what + ", got '" + value + "'");
}

double to_real(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v, "a real number");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v, "an integer");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < INT32_MIN || x > INT32_MAX) bad_value(key, v, "a 32-bit integer");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, std::string v) {
  for (auto& c : v) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  bad_value(key, v, "a boolean");
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

struct Field {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define HMF_REAL(member) \
  Field { [](RunConfig& c, const std::string& k, const std::string& v) { c.member = to_real(k, v); }, \
          [](const RunConfig& c) { return fmt(c.member); } }
#define HMF_INT(member) \
  Field { [](RunConfig& c, const std::string& k, const std::string& v) { c.member = to_int(k, v); }, \
          [](const RunConfig& c) { return std::to_string(c.member); } }

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"surface.tube_radius", HMF_REAL(surface.tube_radius)},
      {"surface.tube_half_height", HMF_REAL(surface.tube_half_height)},
      {"surface.sphere_gap", HMF_REAL(surface.sphere_gap)},
      {"surface.epsilon", HMF_REAL(surface.epsilon)},
      {"surface.genus_parameter", HMF_INT(surface.genus_parameter)},
      {"surface.resolution", HMF_INT(surface.resolution)},
      {"flow.dt",
       {[](RunConfig& c, const std::string& k, const std::string& v) {
          if (v == "auto") {
            c.flow.dt.reset();
          } else {
            c.flow.dt = to_real(k, v);
          }
        },
        [](const RunConfig& c) { return c.flow.dt ? fmt(*c.flow.dt) : std::string("auto"); }}},
      {"flow.dt_safety", HMF_REAL(flow.dt_safety)},
      {"flow.max_steps", HMF_INT(flow.max_steps)},
      {"flow.tension_tol", HMF_REAL(flow.tension_tol)},
      {"flow.energy_drop_alarm", HMF_REAL(flow.energy_drop_alarm)},
      {"flow.concentration_alarm", HMF_REAL(flow.concentration_alarm)},
      {"flow.equivariance_tol", HMF_REAL(flow.equivariance_tol)},
      {"flow.monotone_tol", HMF_REAL(flow.monotone_tol)},
      {"flow.max_halvings", HMF_INT(flow.max_halvings)},
      {"flow.snapshot_every", HMF_INT(flow.snapshot_every)},
      {"flow.deterministic_reduction",
       {[](RunConfig& c, const std::string& k, const std::string& v) { c.flow.deterministic_reduction = to_bool(k, v); },
        [](const RunConfig& c) { return std::string(c.flow.deterministic_reduction ? "true" : "false"); }}},
      {"flow.seed",
       {[](RunConfig& c, const std::string& k, const std::string& v) {
          c.flow.seed = static_cast<std::uint64_t>(to_integer(k, v));
        },
        [](const RunConfig& c) { return std::to_string(c.flow.seed); }}},
      {"region.arc_count", HMF_INT(arc_count)},
      {"region.phase", HMF_REAL(arc_phase)},
      {"run.output_dir",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; },
        [](const RunConfig& c) { return c.output_dir.string(); }}},
      {"run.checks",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.checks = parse_check_set(v); },
        [](const RunConfig& c) { return to_string(c.checks); }}},
      {"run.seed",
       {[](RunConfig& c, const std::string& k, const std::string& v) {
          c.seed = static_cast<std::uint64_t>(to_integer(k, v));
        },
        [](const RunConfig& c) { return std::to_string(c.seed); }}},
      {"run.resume",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.resume = v; },
        [](const RunConfig& c) { return c.resume.string(); }}},
      {"checks.antipodal_samples", HMF_INT(antipodal_samples)},
      {"checks.great_circles", HMF_INT(great_circles)},
      {"checks.trace_step", HMF_REAL(trace_step)},
      {"checks.sweepout_samples", HMF_INT(sweepout_samples)},
      {"checks.sweepout_points", HMF_INT(sweepout_points)},
      {"checks.sweepout_radius", HMF_REAL(sweepout_radius)},
      {"checks.sweepout_neighbors", HMF_INT(sweepout_neighbors)},
      {"checks.courant_lebesgue_delta", HMF_REAL(courant_lebesgue_delta)},
      {"checks.courant_lebesgue_radii", HMF_INT(courant_lebesgue_radii)},
  };
  return table;
}

#undef HMF_REAL
#undef HMF_INT

const Field& field(const std::string& key) {
  for (const auto& [k, f] : fields()) {
    if (k == key) return f;
  }
  throw ConfigError("unknown field " + key);
}

}  // namespace

std::string to_string(CheckSet checks) {
  switch (checks) {
    case CheckSet::All: return "all";
    case CheckSet::RegionOnly: return "region-only";
    case CheckSet::FlowOnly: return "flow-only";
  }
  return "all";
}

CheckSet parse_check_set(const std::string& text) {
  if (text == "all") return CheckSet::All;
  if (text == "region-only") return CheckSet::RegionOnly;
  if (text == "flow-only") return CheckSet::FlowOnly;
  throw ConfigError("field run.checks: expected all, region-only or flow-only, got '" + text + "'");
}

void RunConfig::validate() const {
  try {
    surface.validate();
    flow.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (arc_count < 0) fail("field region.arc_count: must be non-negative");
  if (antipodal_samples < 1) fail("field checks.antipodal_samples: must be at least 1");
  if (great_circles < 1) fail("field checks.great_circles: must be at least 1");
  if (!(trace_step > 0.0)) fail("field checks.trace_step: must be positive");
  if (sweepout_samples < 100) fail("field checks.sweepout_samples: must be at least 100");
  if (sweepout_points < 3) fail("field checks.sweepout_points: must be at least 3");
  if (!(sweepout_radius > 0.0 && sweepout_radius < 1.5707963267948966)) {
    fail("field checks.sweepout_radius: must lie in (0, pi/2)");
  }
  if (sweepout_neighbors < 1) fail("field checks.sweepout_neighbors: must be at least 1");
  if (!(courant_lebesgue_delta >= 0.0 && courant_lebesgue_delta < 1.0)) {
    fail("field checks.courant_lebesgue_delta: must lie in [0, 1)");
  }
  if (courant_lebesgue_radii < 1) fail("field checks.courant_lebesgue_radii: must be at least 1");
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, f] : fields()) keys.push_back(k);
  return keys;
}

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
  field(key).set(config, key, value);
}

std::string get_config_value(const RunConfig& config, const std::string& key) { return field(key).get(config); }

RunConfig parse_config(std::istream& in, const std::string& source) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  RunConfig config;
  auto apply = [&](const std::string& key, const std::string& value) {
    try {
      set_config_value(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ": " + e.what());
    }
  };
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      apply(name, node.data());
    } else {
      for (const auto& [key, leaf] : node) apply(name + "." + key, leaf.data());
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.string());
}

std::string env_name(const std::string& key) {
  std::string name = "HMF_";
  for (char c : key) name += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

void apply_env_overrides(RunConfig& config, const EnvLookup& lookup) {
  for (const auto& key : config_keys()) {
    const std::string name = env_name(key);
    const char* value = lookup ? lookup(name.c_str()) : std::getenv(name.c_str());
    if (!value) continue;
    try {
      set_config_value(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("environment " + name + ": " + e.what());
    }
  }
}

std::string to_ini(const RunConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& key : config_keys()) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      out << (section.empty() ? "" : "\n") << '[' << sec << "]\n";
      section = sec;
    }
    out << key.substr(dot + 1) << " = " << get_config_value(config, key) << '\n';
  }
  return out.str();
}

}  // namespace hmf
