// Command-line driver: build the surface, run the flow, verify the claims.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hmf/config.hpp"
#include "hmf/errors.hpp"
#include "hmf/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  std::string checks;
  std::string resume;
  bool quiet = false;
};

hmf::RunConfig effective_config(const Flags& f) {
  hmf::RunConfig cfg = f.config.empty() ? hmf::RunConfig{} : hmf::load_config(f.config);
  hmf::apply_env_overrides(cfg);
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (f.seed) cfg.seed = cfg.flow.seed = *f.seed;
  if (f.resolution) cfg.surface.resolution = *f.resolution;
  if (!f.checks.empty()) cfg.checks = hmf::parse_check_set(f.checks);
  if (!f.resume.empty()) cfg.resume = f.resume;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic map heat flow laboratory for the propeller-region construction"};
  app.require_subcommand(1, 1);
  Flags flags;
  app.add_option("--config", flags.config, "INI run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", flags.out, "output directory (default hmf_out)");
  app.add_option("--seed", flags.seed, "seed for the Monte-Carlo checks and the flow");
  app.add_option("--resolution", flags.resolution, "mesh resolution level (1 low, 2 medium)")
      ->check(CLI::PositiveNumber);
  app.add_flag("-q,--quiet", flags.quiet, "suppress progress output");
  app.footer("Every config key can be overridden by an environment variable: HMF_ + key in upper case\n"
             "with '.' replaced by '_', e.g. HMF_SURFACE_TUBE_RADIUS=0.05. Flags override both.");

  struct Sub {
    CLI::App* app;
    hmf::Stage stage;
  };
  const Sub subs[] = {
      {app.add_subcommand("build-mesh", "build the surface and the initial map"), hmf::Stage::BuildMesh},
      {app.add_subcommand("run-flow", "build, then run the heat flow"), hmf::Stage::RunFlow},
      {app.add_subcommand("verify", "build, flow and run every requested check"), hmf::Stage::Verify},
      {app.add_subcommand("region-check", "closed-geodesic obstruction checks on the target region"),
       hmf::Stage::RegionCheck},
      {app.add_subcommand("sweepout-check", "sweep-out separation on an arc and a closed loop"),
       hmf::Stage::SweepoutCheck},
  };
  subs[2].app->add_option("--checks", flags.checks, "all, region-only or flow-only")
      ->check(CLI::IsMember({"all", "region-only", "flow-only"}));
  subs[1].app->add_option("--resume", flags.resume, "continue from a checkpoint file")->check(CLI::ExistingFile);
  subs[2].app->add_option("--resume", flags.resume, "continue from a checkpoint file")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    const hmf::RunConfig cfg = effective_config(flags);
    for (const auto& sub : subs) {
      if (!sub.app->parsed()) continue;
      std::ostream null(nullptr);
      const hmf::RunSummary summary = hmf::run_stage(sub.stage, cfg, flags.quiet ? null : std::cerr);
      for (const auto& c : summary.checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
      }
      std::cout << "artifacts in " << cfg.output_dir.string() << '\n';
      if (!summary.all_pass()) std::cout << "failing: " << summary.failing() << '\n';
      return summary.exit_code();
    }
  } catch (const hmf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const hmf::ConstructionError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
