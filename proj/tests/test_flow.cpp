#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hmf/errors.hpp"
#include "hmf/flow.hpp"

using namespace hmf;
using std::numbers::pi;

namespace {

struct Setup {
  SurfaceParams params;
  std::shared_ptr<const SurfaceMesh> mesh;
  MapField u0;
};

Setup low_res() {
  SurfaceParams p;
  p.resolution = 1;
  auto mesh = std::make_shared<const SurfaceMesh>(build_surface(p));
  MapField u0 = build_u0(mesh, p);
  return {p, mesh, std::move(u0)};
}

MapField identity_map(int level) {
  auto ico = std::make_shared<const SurfaceMesh>(build_icosphere(level));
  std::vector<SpherePoint> v;
  for (const Vec3& x : ico->vertices) v.push_back(project_to_sphere(x));
  return MapField(ico, std::move(v));
}

// Unit tangent perturbation at every vertex, fixed by the seed.
std::vector<Vec3> tangent_directions(const MapField& u, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Vec3> d(u.size());
  for (int i = 0; i < u.size(); ++i) {
    const Vec3 x(g(rng), g(rng), g(rng));
    d[i] = x - x.dot(u[i].vec()) * u[i].vec();
  }
  return d;
}

MapField displaced(const MapField& u, const std::vector<Vec3>& d, double h) {
  MapField w = u;
  for (int i = 0; i < u.size(); ++i) w.mutable_values()[i] = project_to_sphere(u[i].vec() + h * d[i]);
  return w;
}

}  // namespace

TEST_CASE("tension of constant maps vanishes") {
  const Setup s = low_res();
  const auto tau = tension_field(MapField::constant(s.mesh, equator_point(0.3)));
  CHECK(max_norm(tau) < 1e-12);
}

TEST_CASE("tension is tangent to the target") {
  const Setup s = low_res();
  MapField u = s.u0;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (auto& q : u.mutable_values()) q = project_to_sphere(q.vec() + 0.3 * Vec3(g(rng), g(rng), g(rng)));
  const auto tau = tension_field(u);
  for (int i = 0; i < u.size(); ++i) CHECK(std::abs(tau[i].dot(u[i].vec())) <= 1e-9 * (1.0 + tau[i].norm()));
}

TEST_CASE("identity tension decays under icosphere refinement") {
  double prev = 1e9;
  for (int level : {2, 3, 4}) {
    const double t = max_norm(tension_field(identity_map(level)));
    CAPTURE(level);
    CAPTURE(t);
    CHECK(t < prev);
    prev = t;
  }
}

TEST_CASE("energy gradient matches finite differences") {
  const Setup s = low_res();
  const CotanOperator op(*s.mesh);
  const auto tau = tension_field(op, s.u0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto d = tangent_directions(s.u0, seed);
    double analytic = 0.0;
    for (int i = 0; i < s.u0.size(); ++i) analytic -= op.mass(i) * tau[i].dot(d[i]);
    const double h = 1e-5;
    const double fd = (dirichlet_energy(op, displaced(s.u0, d, h)) - dirichlet_energy(op, displaced(s.u0, d, -h))) / (2 * h);
    CAPTURE(analytic);
    CAPTURE(fd);
    CHECK(std::abs(fd - analytic) <= 1e-5 * std::abs(analytic));
  }
}

TEST_CASE("one small step decreases the energy at the gradient rate") {
  const Setup s = low_res();
  FlowConfig cfg;
  const HeatFlow auto_flow(s.mesh, cfg, PropellerRegion());
  cfg.dt = 1e-3 * auto_flow.time_step();
  const HeatFlow flow(s.mesh, cfg, PropellerRegion());
  FlowState st = flow.start(s.u0);
  double rate = 0.0;
  for (int i = 0; i < st.field.size(); ++i) rate += flow.op().mass(i) * st.tension[i].squaredNorm();
  const double e0 = st.energy;
  flow.step(st);
  const double predicted = *cfg.dt * rate;
  CHECK(e0 - st.energy == doctest::Approx(predicted).epsilon(0.1));
  CHECK(st.history.back().halvings == 0);
}

TEST_CASE("automatic time step") {
  const Setup s = low_res();
  const HeatFlow flow(s.mesh, FlowConfig{}, PropellerRegion());
  CHECK(flow.time_step() == doctest::Approx(0.9 / flow.op().max_rate()).epsilon(1e-14));
  FlowConfig cfg;
  cfg.dt = 1e-5;
  CHECK(HeatFlow(s.mesh, cfg, PropellerRegion()).time_step() == 1e-5);
}

TEST_CASE("flow_step keeps constants fixed and preserves equivariance") {
  const Setup s = low_res();
  FlowConfig cfg;
  const HeatFlow flow(s.mesh, cfg, PropellerRegion());
  const FlowState c = flow.start(MapField::constant(s.mesh, SpherePoint::north()));
  const FlowState c1 = flow_step(c, cfg);
  for (int i = 0; i < c1.field.size(); ++i) CHECK(c1.field[i] == SpherePoint::north());

  FlowState st = flow.start(s.u0);
  for (int k = 0; k < 50; ++k) st = flow_step(st, cfg);
  CHECK(st.step == 50);
  CHECK(check_equivariance(st.field).max() < 1e-10);
  for (const auto& r : st.history) CHECK(r.equivariance_error < 1e-10);
}

TEST_CASE("step halving enforces monotonicity") {
  const Setup s = low_res();
  FlowConfig cfg;
  cfg.dt = 0.5;  // far above the stability limit
  const HeatFlow flow(s.mesh, cfg, PropellerRegion());
  FlowState st = flow.start(s.u0);
  for (int k = 0; k < 5; ++k) flow.step(st);
  for (std::size_t i = 1; i < st.history.size(); ++i) {
    CHECK(st.history[i].energy <= st.history[i - 1].energy + cfg.monotone_tol * st.reference_energy);
    CHECK(st.history[i].halvings > 0);
    CHECK(st.history[i].dt < 0.5);
  }
  SUBCASE("without halvings the step is rejected") {
    cfg.max_halvings = 0;
    const HeatFlow stiff(s.mesh, cfg, PropellerRegion());
    FlowState st2 = stiff.start(s.u0);
    CHECK_THROWS_AS(stiff.step(st2), StiffnessError);
  }
}

TEST_CASE("short run: monotone, equivariant, contained, no alarms") {
  const Setup s = low_res();
  FlowConfig cfg;
  cfg.max_steps = 400;
  cfg.snapshot_every = 100;
  int snapshots = 0;
  const FlowReport rep = run_flow(s.u0, cfg, PropellerRegion(s.params.epsilon), [&](const FlowState&) { ++snapshots; });
  REQUIRE(rep.history.size() == 401);
  CHECK(snapshots == 5);
  CHECK(rep.snapshot_margins.size() == 5);
  CHECK_FALSE(rep.converged);
  for (std::size_t i = 1; i < rep.history.size(); ++i) {
    CHECK(rep.history[i].energy - rep.history[i - 1].energy <= 1e-8 * rep.reference_energy);
    CHECK(rep.history[i].step == static_cast<int>(i));
    CHECK(rep.history[i].t > rep.history[i - 1].t);
  }
  CHECK(rep.history.back().energy < rep.history.front().energy);
  CHECK(rep.max_equivariance_error < 1e-9);
  CHECK(rep.alarms.empty());
  for (const auto& m : rep.snapshot_margins) CHECK(m.min_margin > 0.0);
}

TEST_CASE("constant maps converge immediately") {
  const Setup s = low_res();
  const FlowReport rep = run_flow(MapField::constant(s.mesh, SpherePoint::south()), FlowConfig{}, PropellerRegion());
  CHECK(rep.converged);
  CHECK(rep.history.size() == 1);
  CHECK(rep.final_max_tension == 0.0);
}

TEST_CASE("deterministic reduction is bitwise reproducible") {
  const Setup s = low_res();
  FlowConfig cfg;
  cfg.max_steps = 150;
  const FlowReport a = run_flow(s.u0, cfg, PropellerRegion());
  const FlowReport b = run_flow(s.u0, cfg, PropellerRegion());
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].energy == b.history[i].energy);
    CHECK(a.history[i].max_tension == b.history[i].max_tension);
  }
  for (int i = 0; i < a.field.size(); ++i) CHECK(a.field[i] == b.field[i]);

  SUBCASE("threaded reduction agrees to roundoff") {
    cfg.deterministic_reduction = false;
    const FlowReport c = run_flow(s.u0, cfg, PropellerRegion());
    REQUIRE(c.history.size() == a.history.size());
    CHECK(c.history.back().energy == doctest::Approx(a.history.back().energy).epsilon(1e-12));
  }
}

TEST_CASE("bubble detection on synthetic histories") {
  FlowConfig cfg;
  std::vector<StepRecord> quiet;
  for (int i = 0; i < 100; ++i) {
    StepRecord r;
    r.step = i;
    r.energy = 1.0 - 0.001 * i;
    r.concentration = 0.01;
    quiet.push_back(r);
  }
  CHECK(detect_bubble(quiet, cfg).empty());

  std::vector<StepRecord> drop = quiet;
  for (int i = 0; i < 100; ++i) drop[i].energy = i < 40 ? 20.0 : 7.0;
  const auto alarms = detect_bubble(drop, cfg);
  REQUIRE(alarms.size() == 1);
  CHECK(alarms[0].kind == BubbleAlarm::Kind::EnergyDrop);
  CHECK(alarms[0].step == 40);
  CHECK(alarms[0].value == doctest::Approx(13.0));
  CHECK(to_string(alarms[0].kind) == "energy_drop");

  std::vector<StepRecord> conc = quiet;
  conc[70].concentration = 0.6;
  const auto a2 = detect_bubble(conc, cfg);
  REQUIRE(a2.size() == 1);
  CHECK(a2[0].kind == BubbleAlarm::Kind::Concentration);
  CHECK(a2[0].step == 70);
}

TEST_CASE("concentration measure") {
  const Setup s = low_res();
  const HeatFlow flow(s.mesh, FlowConfig{}, PropellerRegion());
  const double c = flow.concentration(s.u0);
  CHECK(c > 0.0);
  CHECK(c < 0.25);
  CHECK(flow.concentration(MapField::constant(s.mesh, SpherePoint::north())) == 0.0);
  // u0 is the meridian on each tube: the margin is attained at the waist.
  CHECK(flow.min_margin(s.u0) == doctest::Approx(pi / 6 - 0.05).epsilon(1e-12));
}

TEST_CASE("flow configuration validation") {
  FlowConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.dt = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = {};
  cfg.dt_safety = 1.5;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = {};
  cfg.snapshot_every = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = {};
  cfg.tension_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
}
