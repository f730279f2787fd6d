#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hmf/config.hpp"

namespace hmf {

enum class Stage { BuildMesh, RunFlow, Verify, RegionCheck, SweepoutCheck };

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Outcome of a pipeline stage: named pass/fail checks plus every measured
/// quantity as ordered key/value pairs.
struct RunSummary {
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, std::string>> values;

  bool all_pass() const;
  int exit_code() const { return all_pass() ? 0 : 1; }
  /// Names of the failing checks, comma separated.
  std::string failing() const;
  void set(const std::string& key, double value);
  void set(const std::string& key, const std::string& value);
  void check(const std::string& name, bool pass, const std::string& detail = "");
};

/// Runs one stage and writes its artifacts below config.output_dir:
/// mesh.obj, u0.vtk, snapshots/, checkpoint.json, flow_log.csv,
/// analysis_report.txt and summary.txt (key=value). Progress goes to `log`.
RunSummary run_stage(Stage stage, const RunConfig& config, std::ostream& log);

}  // namespace hmf
