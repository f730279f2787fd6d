#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hmf/flow.hpp"
#include "hmf/surface.hpp"

namespace hmf {

/// Which verification checks a run performs.
enum class CheckSet {
  All,         ///< mesh, flow, analysis, region and sweep-out checks
  RegionOnly,  ///< region obstruction and sweep-out checks, no mesh or flow
  FlowOnly,    ///< mesh, flow and analysis checks
};

std::string to_string(CheckSet checks);
/// Accepts "all", "region-only" and "flow-only". Throws ConfigError otherwise.
CheckSet parse_check_set(const std::string& text);

struct RunConfig {
  SurfaceParams surface;  ///< surface.epsilon is also the region's eps
  FlowConfig flow;
  int arc_count = 0;      ///< removed arcs; 0 selects the tube count
  double arc_phase = 0.0;
  std::filesystem::path output_dir = "hmf_out";
  CheckSet checks = CheckSet::All;
  std::uint64_t seed = 1;          ///< Monte-Carlo checks
  std::filesystem::path resume;    ///< checkpoint to continue from, if set

  int antipodal_samples = 10000;
  int great_circles = 10000;
  double trace_step = 1e-3;
  int sweepout_samples = 10000;
  int sweepout_points = 50;
  double sweepout_radius = 0.2;
  int sweepout_neighbors = 8;
  double courant_lebesgue_delta = 0.0;  ///< 0 selects r^2
  int courant_lebesgue_radii = 32;

  int region_arc_count() const { return arc_count > 0 ? arc_count : surface.tube_count(); }
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Every configuration key, in the order they are written by to_ini.
std::vector<std::string> config_keys();

/// Sets one dotted key ("surface.tube_radius", "flow.dt", ...). Throws
/// ConfigError naming the key on unknown keys or unparsable values.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);
std::string get_config_value(const RunConfig& config, const std::string& key);

/// INI text: "[section]" headers followed by "key = value" lines, or
/// top-level "section.key = value" lines; ';' and '#' start comment lines.
/// Errors carry "<source>:<line>" for syntax and the key for values.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Environment variable consulted for a key: HMF_ followed by the key in
/// upper case with '.' replaced by '_', e.g. HMF_SURFACE_TUBE_RADIUS.
std::string env_name(const std::string& key);

using EnvLookup = std::function<const char*(const char*)>;
/// Applies every set HMF_* variable on top of `config`.
void apply_env_overrides(RunConfig& config, const EnvLookup& lookup = {});

/// The effective configuration in the format parse_config reads.
std::string to_ini(const RunConfig& config);

}  // namespace hmf
