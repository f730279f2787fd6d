#include "hmf/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

#include "hmf/analysis.hpp"
#include "hmf/errors.hpp"
#include "hmf/flow.hpp"
#include "hmf/initmap.hpp"
#include "hmf/io.hpp"
#include "hmf/region.hpp"
#include "hmf/surface.hpp"

namespace hmf {

bool RunSummary::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string RunSummary::failing() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.pass) continue;
    if (!out.empty()) out += ',';
    out += c.name;
  }
  return out;
}

void RunSummary::set(const std::string& key, double value) {
  std::ostringstream s;
  s << std::setprecision(17) << value;
  set(key, s.str());
}

void RunSummary::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : values) {
    if (k == key) {
      v = value;
      return;
    }
  }
  values.emplace_back(key, value);
}

void RunSummary::check(const std::string& name, bool pass, const std::string& detail) {
  checks.push_back({name, pass, detail});
}

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

struct Context {
  const RunConfig& config;
  std::ostream& log;
  RunSummary summary;
  PropellerRegion region;
  std::shared_ptr<const SurfaceMesh> mesh;
  std::optional<MapField> u0;
  std::optional<FlowReport> flow;
  std::optional<double> initial_energy;

  Context(const RunConfig& c, std::ostream& l)
      : config(c), log(l), region(c.surface.epsilon, c.region_arc_count(), c.arc_phase) {}

  std::filesystem::path out(const std::string& name) const { return config.output_dir / name; }
};

void mesh_stage(Context& ctx) {
  const auto t0 = Clock::now();
  const SurfaceParams& sp = ctx.config.surface;
  ctx.mesh = std::make_shared<const SurfaceMesh>(build_surface(sp));
  const SurfaceMesh& mesh = *ctx.mesh;
  write_obj(mesh, ctx.out("mesh.obj"));

  auto& s = ctx.summary;
  const TopologyReport topo = mesh_topology(mesh);
  const int want_chi = 2 - 2 * sp.genus();
  s.set("mesh.vertices", std::to_string(topo.vertices));
  s.set("mesh.edges", std::to_string(topo.edges));
  s.set("mesh.faces", std::to_string(topo.faces));
  s.set("mesh.euler_characteristic", std::to_string(topo.euler_characteristic));
  s.set("mesh.area", total_area(mesh));
  s.set("mesh.min_face_area", topo.min_face_area);
  s.check("topology", topo.closed && topo.oriented && topo.euler_characteristic == want_chi && topo.min_face_area > 0.0,
          "chi=" + std::to_string(topo.euler_characteristic) + " (want " + std::to_string(want_chi) +
              "), closed=" + (topo.closed ? "yes" : "no") + ", oriented=" + (topo.oriented ? "yes" : "no"));

  const SymmetryResidual res = mesh_symmetry_residual(mesh);
  const std::string tables = check_symmetry_tables(mesh);
  s.set("mesh.symmetry_residual_cyclic", res.cyclic);
  s.set("mesh.symmetry_residual_reflection", res.reflection);
  s.check("mesh_symmetry", res.max() <= 1e-9 && tables.empty(),
          "residual=" + num(res.max()) + (tables.empty() ? "" : ", " + tables));

  const CotanOperator op(mesh);
  ctx.u0 = build_u0(ctx.mesh, sp);
  const double e0 = op.energy(ctx.u0->values());
  ctx.initial_energy = e0;
  write_vtk(mesh, field_attributes(*ctx.u0, ctx.region), ctx.out("u0.vtk"));
  s.set("mesh.negative_weight_edges", std::to_string(op.negative_weight_edges()));
  s.set("mesh.max_rate", op.max_rate());
  s.set("u0.energy", e0);
  s.set("u0.energy_bound", energy_bound(sp));
  s.set("u0.energy_ratio", e0 / energy_bound(sp));
  s.set("u0.cylinder_energy", cylinder_energy(sp));
  s.set("u0.r2_over_R", sp.tube_radius * sp.tube_radius / sp.tube_half_height);
  s.set("u0.equivariance_error", check_equivariance(*ctx.u0).max());
  s.set("time.mesh_seconds", seconds_since(t0));
  if (op.negative_weight_edges() > 0) {
    ctx.log << "warning: " << op.negative_weight_edges() << " edges have negative cotangent weight\n";
  }
  ctx.log << "mesh: " << topo.vertices << " vertices, chi=" << topo.euler_characteristic << ", E(u0)=" << e0 << "\n";
}

void write_log_rows(const std::vector<StepRecord>& history, bool append, const std::filesystem::path& path) {
  if (!append) {
    write_flow_log(history, path);
    return;
  }
  // A resumed run repeats the checkpointed step as its first record.
  std::ostringstream all;
  write_flow_log(std::vector<StepRecord>(history.begin() + 1, history.end()), all);
  const std::string text = all.str();
  std::ofstream out(path, std::ios::app);
  out << text.substr(text.find('\n') + 1);
}

void flow_stage(Context& ctx) {
  const auto t0 = Clock::now();
  const RunConfig& cfg = ctx.config;
  const HeatFlow flow(ctx.mesh, cfg.flow, ctx.region);
  FlowState start = [&] {
    if (cfg.resume.empty()) return flow.start(*ctx.u0);
    const Checkpoint cp = load_checkpoint(cfg.resume);
    const SurfaceParams& a = cp.params;
    const SurfaceParams& b = cfg.surface;
    if (a.tube_radius != b.tube_radius || a.tube_half_height != b.tube_half_height || a.sphere_gap != b.sphere_gap ||
        a.genus_parameter != b.genus_parameter || a.resolution != b.resolution) {
      throw ConfigError("run.resume: checkpoint was written for different surface parameters");
    }
    std::vector<SpherePoint> vals;
    // Stored values are exact doubles; renormalizing would perturb the last bits.
    for (const auto& v : cp.values) vals.push_back(SpherePoint::from_unit(v));
    ctx.log << "resuming from step " << cp.step << " at t=" << cp.time << "\n";
    return flow.resume(MapField(ctx.mesh, std::move(vals)), cp.step, cp.time, cp.reference_energy);
  }();
  const double reference = start.reference_energy;
  ctx.log << "flow: dt=" << flow.time_step() << ", max_rate=" << flow.op().max_rate()
          << ", tension_tol=" << cfg.flow.tension_tol << ", max_steps=" << cfg.flow.max_steps << "\n";

  std::filesystem::create_directories(ctx.out("snapshots"));
  int degree_min = 0, degree_max = 0, snapshots = 0;
  double degree_residual = 0.0;
  bool degree_ok = true;
  double snap_equivariance = 0.0;
  const auto on_snapshot = [&](const FlowState& st) {
    char name[64];
    std::snprintf(name, sizeof name, "snap_%08d.vtk", st.step);
    write_vtk(*ctx.mesh, field_attributes(st.field, ctx.region), ctx.out("snapshots") / name);
    save_checkpoint(make_checkpoint(st), ctx.out("checkpoint.json"));
    try {
      const DegreeReport d = map_degree(st.field);
      degree_min = snapshots == 0 ? d.degree : std::min(degree_min, d.degree);
      degree_max = snapshots == 0 ? d.degree : std::max(degree_max, d.degree);
      degree_residual = std::max(degree_residual, d.residual);
    } catch (const ResolutionError&) {
      degree_ok = false;
    }
    ++snapshots;
    const StepRecord& r = st.history.back();
    snap_equivariance = std::max(snap_equivariance, r.equivariance_error);
    ctx.log << "  step " << st.step << " t=" << st.time << " E=" << st.energy << " max|tau|=" << st.max_tension
            << " equivariance=" << r.equivariance_error << " margin=" << r.min_margin << "\n";
  };
  ctx.flow = run_flow(flow, std::move(start), on_snapshot);
  const FlowReport& rep = *ctx.flow;
  write_log_rows(rep.history, !cfg.resume.empty(), ctx.out("flow_log.csv"));

  // Monotonicity over the accepted steps of this run.
  double worst_rise = -std::numeric_limits<double>::infinity();
  int halved_steps = 0;
  for (std::size_t i = 1; i < rep.history.size(); ++i) {
    worst_rise = std::max(worst_rise, rep.history[i].energy - rep.history[i - 1].energy);
    halved_steps += rep.history[i].halvings > 0;
  }
  const double rise_tol = cfg.flow.monotone_tol * reference;
  auto& s = ctx.summary;
  const int steps = rep.history.back().step;
  s.set("flow.dt", rep.time_step);
  s.set("flow.steps", std::to_string(steps));
  s.set("flow.time", rep.history.back().t);
  s.set("flow.final_energy", rep.history.back().energy);
  s.set("flow.final_max_tension", rep.final_max_tension);
  s.set("flow.converged", rep.converged ? "true" : "false");
  s.set("flow.max_energy_rise", rep.history.size() > 1 ? worst_rise : 0.0);
  s.set("flow.halved_steps", std::to_string(halved_steps));
  s.set("flow.max_equivariance_error", rep.max_equivariance_error);
  s.set("flow.bubble_alarms", std::to_string(rep.alarms.size()));
  s.set("flow.final_min_margin", rep.history.back().min_margin);
  s.set("flow.snapshots", std::to_string(snapshots));
  s.set("flow.snapshot_degree_min", std::to_string(degree_min));
  s.set("flow.snapshot_degree_max", std::to_string(degree_max));
  s.set("time.flow_seconds", seconds_since(t0));

  s.check("monotonicity", rep.history.size() < 2 || worst_rise <= rise_tol,
          "max rise " + num(worst_rise) + " vs allowed " + num(rise_tol));
  s.check("convergence", rep.converged, "max|tau|=" + num(rep.final_max_tension) + " after " + std::to_string(steps) + " steps");
  s.check("equivariance", rep.max_equivariance_error < cfg.flow.equivariance_tol,
          "max error " + num(rep.max_equivariance_error));
  s.check("bubble_alarms", rep.alarms.empty(), std::to_string(rep.alarms.size()) + " alarms");
  s.check("snapshot_degree", degree_ok && degree_min == 0 && degree_max == 0,
          "degrees in [" + std::to_string(degree_min) + ", " + std::to_string(degree_max) + "], residual " +
              num(degree_residual));
  ctx.log << "flow: " << (rep.converged ? "converged" : "not converged") << " after " << steps << " steps\n";
}

void energy_checks(Context& ctx) {
  const SurfaceParams& sp = ctx.config.surface;
  const double e0 = *ctx.initial_energy;
  const double bound = energy_bound(sp);
  ctx.summary.check("energy_bound", e0 > 0.0 && e0 <= 1.5 * bound,
                    "E(u0)=" + num(e0) + " vs 1.5 x bound " + num(1.5 * bound));
  ctx.summary.check("bubble_headroom", e0 < 4.0 * kPi / 100.0, "E(u0)=" + num(e0) + " vs 4pi/100=" + num(4.0 * kPi / 100.0));
}

void analysis_stage(Context& ctx) {
  const auto t0 = Clock::now();
  const RunConfig& cfg = ctx.config;
  const MapField& u = ctx.flow->field;
  auto& s = ctx.summary;
  const CotanOperator op(*ctx.mesh);

  const double residual = harmonic_residual(op, u);
  s.set("analysis.harmonic_residual", residual);
  s.check("harmonic_residual", residual < cfg.flow.tension_tol, "sup|tau|=" + num(residual));

  bool degree_ok = false;
  std::string detail;
  try {
    const DegreeReport d0 = map_degree(*ctx.u0);
    const DegreeReport d1 = map_degree(u);
    s.set("analysis.degree_u0", std::to_string(d0.degree));
    s.set("analysis.degree", std::to_string(d1.degree));
    s.set("analysis.degree_residual_u0", d0.residual);
    s.set("analysis.degree_residual", d1.residual);
    degree_ok = d0.degree == 0 && d1.degree == 0 && d0.residual < 0.05 && d1.residual < 0.05;
    detail = "deg(u0)=" + std::to_string(d0.degree) + ", deg(u_inf)=" + std::to_string(d1.degree) + ", residuals " +
             num(d0.residual) + ", " + num(d1.residual);
  } catch (const ResolutionError& e) {
    detail = e.what();
  }
  s.check("degree", degree_ok, detail);

  const ContainmentReport c0 = containment(*ctx.u0, ctx.region);
  const ContainmentReport c = containment(u, ctx.region);
  s.set("analysis.min_margin_u0", c0.min_margin);
  s.set("analysis.min_margin", c.min_margin);
  s.set("analysis.min_vertex_margin", c.min_vertex_margin);
  s.set("analysis.min_midpoint_margin", c.min_midpoint_margin);
  for (const auto& [kind, m] : c.margin_by_region) s.set("analysis.min_margin." + to_string(kind), m);
  s.check("containment", c.contained(),
          "min margin " + num(c.min_margin) + ", " + std::to_string(c.offending_vertices.size()) + " offending vertices");

  std::vector<int> centers;
  try {
    const EquatorPointsReport eq = find_equator_points(u, 1e-6);
    centers = eq.vertices;
    s.set("analysis.equator_deviation", eq.max_equator_deviation);
    s.set("analysis.permutation_error", eq.max_permutation_error);
    for (std::size_t i = 0; i < eq.images.size(); ++i) {
      s.set("analysis.p" + std::to_string(i + 1) + ".vertex", std::to_string(eq.vertices[i]));
      s.set("analysis.p" + std::to_string(i + 1) + ".longitude", eq.images[i].longitude());
    }
    s.check("equator_points", eq.pass,
            "equator deviation " + num(eq.max_equator_deviation) + ", permutation error " + num(eq.max_permutation_error));
  } catch (const InconsistencyError& e) {
    s.check("equator_points", false, e.what());
  }

  const double r = cfg.surface.tube_radius;
  const double delta = cfg.courant_lebesgue_delta > 0.0 ? cfg.courant_lebesgue_delta : r * r;
  s.set("analysis.cl_delta", delta);
  bool cl_ok = !centers.empty();
  std::string cl_detail;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    try {
      const CourantLebesgueReport cl = check_courant_lebesgue(u, centers[i], delta, {}, cfg.courant_lebesgue_radii);
      const std::string p = "analysis.cl.p" + std::to_string(i + 1);
      s.set(p + ".lhs", cl.lhs);
      s.set(p + ".rhs", cl.rhs);
      if (cl.s_found) s.set(p + ".s", *cl.s_found);
      cl_ok = cl_ok && cl.pass;
      cl_detail += (cl_detail.empty() ? "" : "; ") + std::string("p") + std::to_string(i + 1) + ": " + num(cl.lhs) +
                   " <= " + num(cl.rhs) + (cl.pass ? "" : " FAILED");
    } catch (const ResolutionError& e) {
      cl_ok = false;
      cl_detail += e.what();
    }
  }
  s.check("courant_lebesgue", cl_ok, cl_detail);
  s.set("time.analysis_seconds", seconds_since(t0));
}

void region_stage(Context& ctx) {
  const auto t0 = Clock::now();
  const RunConfig& cfg = ctx.config;
  auto& s = ctx.summary;
  const AntipodalReport a = antipodal_obstruction_check(ctx.region, cfg.antipodal_samples, cfg.seed);
  s.set("region.antipodal_samples", std::to_string(a.samples));
  s.set("region.antipodal_witnesses", std::to_string(a.witnesses.size()));
  s.check("antipodal_obstruction", a.pass, std::to_string(a.witnesses.size()) + " witnesses in " + std::to_string(a.samples));

  const GreatCircleReport g = great_circle_obstruction_check(ctx.region, cfg.great_circles, cfg.seed, cfg.trace_step);
  s.set("region.great_circles", std::to_string(g.circles));
  s.set("region.great_circle_misses", std::to_string(g.misses));
  s.set("region.min_penetration", g.min_penetration);
  s.check("great_circle_obstruction", g.pass,
          std::to_string(g.misses) + " of " + std::to_string(g.circles) + " circles miss; min penetration " +
              num(g.min_penetration));
  s.set("time.region_seconds", seconds_since(t0));
  ctx.log << "region: antipodal " << (a.pass ? "pass" : "fail") << ", great circles " << (g.pass ? "pass" : "fail") << "\n";
}

SweepoutReport sweepout_case(const RunConfig& cfg, bool closed) {
  std::vector<SpherePoint> curve;
  std::vector<double> radii;
  const int n = cfg.sweepout_points;
  for (int i = 0; i < n; ++i) {
    const double th = closed ? 2.0 * kPi * i / n : 0.5 * kPi * i / (n - 1);
    curve.push_back(equator_point(th));
    radii.push_back(cfg.sweepout_radius);
  }
  const SampleGraph g = knn_graph(sample_ball_union(curve, radii, cfg.sweepout_samples, cfg.seed), cfg.sweepout_neighbors);
  return check_sweepout_separation(g, curve, radii);
}

void sweepout_stage(Context& ctx) {
  const auto t0 = Clock::now();
  auto& s = ctx.summary;
  const SweepoutReport open = sweepout_case(ctx.config, false);
  const SweepoutReport closed = sweepout_case(ctx.config, true);
  s.set("sweepout.open_pass", open.pass ? "true" : "false");
  s.set("sweepout.closed_pass", closed.pass ? "true" : "false");
  s.set("sweepout.link_radius", open.link_radius);
  s.check("sweepout_arc", open.pass,
          open.pass ? "separated at every interior index"
                    : "index " + std::to_string(*open.failing_index) + " leaves " +
                          std::to_string(open.failing_components) + " components");
  s.check("sweepout_loop_rejected", !closed.pass,
          closed.pass ? "closed loop wrongly separated"
                      : "index " + std::to_string(*closed.failing_index) + " leaves " +
                            std::to_string(closed.failing_components) + " component(s)");
  s.set("time.sweepout_seconds", seconds_since(t0));
  ctx.log << "sweepout: arc " << (open.pass ? "pass" : "fail") << ", loop " << (closed.pass ? "separated" : "rejected")
          << "\n";
}

void write_outputs(const Context& ctx, Stage stage) {
  const RunSummary& s = ctx.summary;
  {
    std::ofstream out(ctx.out("summary.txt"));
    for (const auto& [k, v] : s.values) out << k << '=' << v << '\n';
    for (const auto& c : s.checks) out << "check." << c.name << '=' << (c.pass ? "pass" : "fail") << '\n';
    out << "all_pass=" << (s.all_pass() ? "true" : "false") << '\n';
    out << "failing=" << s.failing() << '\n';
  }
  std::ofstream out(ctx.out("analysis_report.txt"));
  static const char* names[] = {"build-mesh", "run-flow", "verify", "region-check", "sweepout-check"};
  out << "stage: " << names[static_cast<int>(stage)] << "\n\n# configuration\n" << to_ini(ctx.config) << "\n# checks\n";
  for (const auto& c : s.checks) out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  out << "\n# quantities\n";
  for (const auto& [k, v] : s.values) out << k << " = " << v << '\n';
}

}  // namespace

RunSummary run_stage(Stage stage, const RunConfig& config, std::ostream& log) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);
  Context ctx(config, log);
  const bool region_only = stage == Stage::Verify && config.checks == CheckSet::RegionOnly;
  const bool mesh = stage == Stage::BuildMesh || stage == Stage::RunFlow || (stage == Stage::Verify && !region_only);
  const bool flow = stage == Stage::RunFlow || (stage == Stage::Verify && !region_only);
  const bool analysis = stage == Stage::Verify && !region_only;
  const bool region = stage == Stage::RegionCheck || (stage == Stage::Verify && config.checks != CheckSet::FlowOnly);
  const bool sweep = stage == Stage::SweepoutCheck || (stage == Stage::Verify && config.checks != CheckSet::FlowOnly);

  if (mesh) mesh_stage(ctx);
  if (analysis) energy_checks(ctx);
  if (flow) flow_stage(ctx);
  if (analysis) analysis_stage(ctx);
  if (region) region_stage(ctx);
  if (sweep) sweepout_stage(ctx);
  write_outputs(ctx, stage);
  return ctx.summary;
}

}  // namespace hmf
