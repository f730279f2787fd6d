#include "hmf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "hmf/errors.hpp"

namespace hmf {

void FlowConfig::validate() const {
  if (dt && !(*dt > 0.0)) throw InputError("flow: dt must be positive");
  if (!(dt_safety > 0.0 && dt_safety <= 1.0)) throw InputError("flow: dt_safety must lie in (0, 1]");
  if (max_steps < 0) throw InputError("flow: max_steps must be non-negative");
  if (!(tension_tol > 0.0)) throw InputError("flow: tension_tol must be positive");
  if (!(energy_drop_alarm > 0.0)) throw InputError("flow: energy_drop_alarm must be positive");
  if (!(concentration_alarm > 0.0)) throw InputError("flow: concentration_alarm must be positive");
  if (!(equivariance_tol > 0.0)) throw InputError("flow: equivariance_tol must be positive");
  if (!(monotone_tol >= 0.0)) throw InputError("flow: monotone_tol must be non-negative");
  if (max_halvings < 0) throw InputError("flow: max_halvings must be non-negative");
  if (snapshot_every < 1) throw InputError("flow: snapshot_every must be at least 1");
}

std::vector<Vec3> tension_field(const CotanOperator& op, const MapField& field) {
  if (op.size() != field.size()) throw InputError("tension_field: operator and field sizes differ");
  std::vector<Vec3> tau(field.size());
  const auto u = field.values();
  for (int i = 0; i < field.size(); ++i) {
    const Vec3 l = op.laplacian(u, i);
    const Vec3& q = u[i].vec();
    tau[i] = l - q.dot(l) * q;
  }
  return tau;
}

std::vector<Vec3> tension_field(const MapField& field) { return tension_field(CotanOperator(field.mesh()), field); }

double max_norm(const std::vector<Vec3>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, x.norm());
  return m;
}

HeatFlow::HeatFlow(std::shared_ptr<const SurfaceMesh> mesh, FlowConfig config, PropellerRegion region)
    : mesh_(std::move(mesh)), config_(std::move(config)), region_(std::move(region)), op_(*mesh_) {
  config_.validate();
  dt_ = config_.dt ? *config_.dt : config_.dt_safety / op_.max_rate();

  // Closed 2-rings for the concentration monitor.
  const int n = op_.size();
  ring_offsets_.assign(n + 1, 0);
  std::vector<int> mark(n, -1);
  for (int i = 0; i < n; ++i) {
    std::vector<int> ring{i};
    mark[i] = i;
    for (int j : op_.neighbors(i)) {
      if (mark[j] != i) mark[j] = i, ring.push_back(j);
    }
    for (int j : op_.neighbors(i)) {
      for (int k : op_.neighbors(j)) {
        if (mark[k] != i) mark[k] = i, ring.push_back(k);
      }
    }
    rings_.insert(rings_.end(), ring.begin(), ring.end());
    ring_offsets_[i + 1] = static_cast<int>(rings_.size());
  }
}

double HeatFlow::energy(std::span<const SpherePoint> u) const {
  if (config_.deterministic_reduction) return op_.energy(u);
  // Partial sums over vertex slices, combined in completion order.
  constexpr int kWorkers = 4;
  double total = 0.0;
  std::mutex lock;
  std::vector<std::thread> pool;
  for (int w = 0; w < kWorkers; ++w) {
    pool.emplace_back([&, w] {
      double e = 0.0;
      for (int i = w; i < op_.size(); i += kWorkers) {
        const auto nb = op_.neighbors(i);
        const auto wt = op_.weights(i);
        for (std::size_t k = 0; k < nb.size(); ++k) {
          if (nb[k] > i) e += wt[k] * (u[i].vec() - u[nb[k]].vec()).squaredNorm();
        }
      }
      std::lock_guard<std::mutex> g(lock);
      total += e;
    });
  }
  for (auto& t : pool) t.join();
  return 0.5 * total;
}

double HeatFlow::min_margin(const MapField& field) const {
  // The forbidden arcs lie on the Equator, so |latitude| bounds the distance
  // from below and most vertices are skipped without the full query.
  double best = std::numeric_limits<double>::infinity();
  double skip = 2.0;  // sin(best) while best < pi/2
  for (const auto& q : field.values()) {
    if (std::abs(q.z()) >= skip) continue;
    const double d = region_.distance_to_forbidden(q);
    if (d < best) {
      best = d;
      skip = best < std::numbers::pi / 2 ? std::sin(best) : 2.0;
    }
  }
  return best - region_.epsilon();
}

double HeatFlow::concentration(const MapField& field) const {
  const std::vector<double> ve = op_.vertex_energy(field.values());
  double total = 0.0;
  for (double e : ve) total += e;
  if (!(total > 0.0)) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < op_.size(); ++i) {
    double s = 0.0;
    for (int k = ring_offsets_[i]; k < ring_offsets_[i + 1]; ++k) s += ve[rings_[k]];
    worst = std::max(worst, s);
  }
  return worst / total;
}

StepRecord HeatFlow::record(const FlowState& state) const {
  StepRecord r;
  r.step = state.step;
  r.t = state.time;
  r.energy = state.energy;
  r.max_tension = state.max_tension;
  r.equivariance_error = check_equivariance(state.field).max();
  r.min_margin = min_margin(state.field);
  r.concentration = concentration(state.field);
  return r;
}

FlowState HeatFlow::start(MapField u0, std::optional<double> reference_energy) const {
  if (&u0.mesh() != mesh_.get() && u0.mesh().vertex_count() != mesh_->vertex_count()) {
    throw InputError("HeatFlow: field lives on a different mesh");
  }
  FlowState s{std::move(u0), 0.0, 0, 0.0, 0.0, {}, 0.0, {}};
  s.energy = energy(s.field.values());
  s.reference_energy = reference_energy ? *reference_energy : s.energy;
  s.tension = tension_field(op_, s.field);
  s.max_tension = max_norm(s.tension);
  s.history.push_back(record(s));
  return s;
}

FlowState HeatFlow::resume(MapField field, int step, double time, double reference_energy) const {
  FlowState s = start(std::move(field), reference_energy);
  s.step = step;
  s.time = time;
  s.history.front().step = step;
  s.history.front().t = time;
  return s;
}

void HeatFlow::step(FlowState& state) const {
  const auto old = state.field.values();
  const double allowed = state.energy + config_.monotone_tol * state.reference_energy;
  std::vector<SpherePoint> trial(old.size());
  double dt = dt_;
  double e_new = 0.0;
  int halvings = 0;
  for (;; ++halvings) {
    // |u + dt tau| >= 1 because tau is tangent, so the projection is safe.
    for (std::size_t i = 0; i < old.size(); ++i) trial[i] = project_to_sphere(old[i].vec() + dt * state.tension[i]);
    e_new = energy(trial);
    if (e_new <= allowed) break;
    if (halvings == config_.max_halvings) {
      std::ostringstream msg;
      msg << "flow: energy rose after " << halvings << " halvings at step " << state.step + 1 << " (E=" << state.energy
          << ", E_trial=" << e_new << ", dt=" << dt << ", max|tau|=" << state.max_tension << ")";
      throw StiffnessError(msg.str());
    }
    dt *= 0.5;
  }
  state.field.mutable_values() = std::move(trial);
  state.time += dt;
  state.step += 1;
  state.energy = e_new;
  state.tension = tension_field(op_, state.field);
  state.max_tension = max_norm(state.tension);
  StepRecord r = record(state);
  r.dt = dt;
  r.halvings = halvings;
  state.history.push_back(r);
}

FlowState flow_step(const FlowState& state, const FlowConfig& config, const PropellerRegion& region) {
  const HeatFlow flow(state.field.mesh_ptr(), config, region);
  FlowState next = state;
  if (next.tension.size() != static_cast<std::size_t>(next.field.size())) {
    next.tension = tension_field(flow.op(), next.field);
    next.max_tension = max_norm(next.tension);
  }
  flow.step(next);
  return next;
}

std::string to_string(BubbleAlarm::Kind kind) {
  return kind == BubbleAlarm::Kind::EnergyDrop ? "energy_drop" : "concentration";
}

std::vector<BubbleAlarm> detect_bubble(const std::vector<StepRecord>& history, const FlowConfig& config) {
  std::vector<BubbleAlarm> alarms;
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (i > 0) {
      const double drop = history[i - 1].energy - history[i].energy;
      if (drop >= config.energy_drop_alarm) alarms.push_back({BubbleAlarm::Kind::EnergyDrop, history[i].step, drop});
    }
    if (history[i].concentration > config.concentration_alarm) {
      alarms.push_back({BubbleAlarm::Kind::Concentration, history[i].step, history[i].concentration});
    }
  }
  return alarms;
}

FlowReport run_flow(const HeatFlow& flow, FlowState state, const SnapshotCallback& on_snapshot) {
  const FlowConfig& cfg = flow.config();
  FlowReport rep{state.field, {}, false, 0.0, 0.0, 0.0, 0.0, {}, {}};
  auto snapshot = [&] {
    rep.snapshot_margins.push_back({state.step, state.time, state.history.back().min_margin});
    if (on_snapshot) on_snapshot(state);
  };
  if (state.history.empty()) state.history.push_back(flow.record(state));
  snapshot();
  int taken = 0;
  while (state.max_tension >= cfg.tension_tol && taken < cfg.max_steps) {
    flow.step(state);
    ++taken;
    if (state.step % cfg.snapshot_every == 0) snapshot();
  }
  if (rep.snapshot_margins.back().step != state.step) snapshot();

  rep.converged = state.max_tension < cfg.tension_tol;
  rep.final_max_tension = state.max_tension;
  rep.time_step = flow.time_step();
  rep.reference_energy = state.reference_energy;
  for (const auto& r : state.history) rep.max_equivariance_error = std::max(rep.max_equivariance_error, r.equivariance_error);
  rep.alarms = detect_bubble(state.history, cfg);
  rep.history = std::move(state.history);
  rep.field = std::move(state.field);
  return rep;
}

FlowReport run_flow(const MapField& u0, const FlowConfig& config, const PropellerRegion& region,
                    const SnapshotCallback& on_snapshot) {
  const HeatFlow flow(u0.mesh_ptr(), config, region);
  return run_flow(flow, flow.start(u0), on_snapshot);
}

}  // namespace hmf
