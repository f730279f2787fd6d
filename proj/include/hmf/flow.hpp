#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hmf/cotan.hpp"
#include "hmf/initmap.hpp"
#include "hmf/region.hpp"

namespace hmf {

struct FlowConfig {
  /// Fixed time step; unset selects dt_safety / max_rate of the mesh.
  std::optional<double> dt;
  double dt_safety = 0.9;
  int max_steps = 100000;
  double tension_tol = 1e-4;               ///< stop when max |tau| drops below
  double energy_drop_alarm = 2.0 * std::numbers::pi;  ///< half the bubble energy 4 pi
  double concentration_alarm = 0.25;       ///< fraction of energy in one 2-ring
  double equivariance_tol = 1e-9;
  double monotone_tol = 1e-8;              ///< allowed rise per step, relative to E(u0)
  int max_halvings = 20;
  int snapshot_every = 1000;
  bool deterministic_reduction = true;
  std::uint64_t seed = 1;

  /// Throws InputError on non-positive tolerances or step counts.
  void validate() const;
};

struct StepRecord {
  int step = 0;
  double t = 0.0;
  double energy = 0.0;
  double max_tension = 0.0;
  double equivariance_error = 0.0;
  double min_margin = 0.0;     ///< min over vertices of distance_to_forbidden - eps
  double concentration = 0.0;  ///< max 2-ring share of the energy
  double dt = 0.0;             ///< step actually taken (0 for the initial record)
  int halvings = 0;
};

struct FlowState {
  MapField field;
  double time = 0.0;
  int step = 0;
  double energy = 0.0;
  double reference_energy = 0.0;  ///< E(u0), scale of the monotonicity tolerance
  std::vector<Vec3> tension;      ///< tension of `field`
  double max_tension = 0.0;
  std::vector<StepRecord> history;
};

/// tau_i = P_{u_i} (M^-1 L u)_i with P_q = I - q q^T.
std::vector<Vec3> tension_field(const CotanOperator& op, const MapField& field);
std::vector<Vec3> tension_field(const MapField& field);

/// sup_i |tau_i|.
double max_norm(const std::vector<Vec3>& v);

/// Explicit projected Euler integrator for the harmonic map heat flow on a
/// fixed mesh, with the diagnostics recorded after every step.
class HeatFlow {
 public:
  HeatFlow(std::shared_ptr<const SurfaceMesh> mesh, FlowConfig config, PropellerRegion region);

  const CotanOperator& op() const { return op_; }
  const FlowConfig& config() const { return config_; }
  const PropellerRegion& region() const { return region_; }
  /// The configured dt, or dt_safety / max_rate.
  double time_step() const { return dt_; }

  /// Initial state with its step-0 record. reference_energy defaults to the
  /// energy of u0.
  FlowState start(MapField u0, std::optional<double> reference_energy = {}) const;
  /// State continuing a checkpointed run from the given step and time.
  FlowState resume(MapField field, int step, double time, double reference_energy) const;

  /// One accepted step: u <- normalize(u + dt tau), halving dt while the
  /// energy rises by more than monotone_tol * reference_energy. Throws
  /// StiffnessError after max_halvings failed halvings.
  void step(FlowState& state) const;

  /// Diagnostics of the current field, without the time-step fields.
  StepRecord record(const FlowState& state) const;

  double min_margin(const MapField& field) const;
  double concentration(const MapField& field) const;

 private:
  double energy(std::span<const SpherePoint> u) const;

  std::shared_ptr<const SurfaceMesh> mesh_;
  FlowConfig config_;
  PropellerRegion region_;
  CotanOperator op_;
  double dt_;
  std::vector<int> ring_offsets_;
  std::vector<int> rings_;  ///< closed 2-ring of every vertex, CSR
};

/// Builds a HeatFlow for the state's mesh and takes a single step.
FlowState flow_step(const FlowState& state, const FlowConfig& config,
                    const PropellerRegion& region = PropellerRegion());

struct BubbleAlarm {
  enum class Kind { EnergyDrop, Concentration };
  Kind kind = Kind::EnergyDrop;
  int step = 0;
  double value = 0.0;
};

std::string to_string(BubbleAlarm::Kind kind);

/// Flags single-step energy drops >= energy_drop_alarm and records whose
/// 2-ring concentration exceeds concentration_alarm.
std::vector<BubbleAlarm> detect_bubble(const std::vector<StepRecord>& history, const FlowConfig& config);

struct SnapshotMargin {
  int step = 0;
  double time = 0.0;
  double min_margin = 0.0;
};

struct FlowReport {
  MapField field;  ///< u_infinity
  std::vector<StepRecord> history;
  bool converged = false;
  double final_max_tension = 0.0;
  double time_step = 0.0;
  double reference_energy = 0.0;
  double max_equivariance_error = 0.0;
  std::vector<BubbleAlarm> alarms;
  std::vector<SnapshotMargin> snapshot_margins;
};

using SnapshotCallback = std::function<void(const FlowState&)>;

/// Steps until max |tau| < tension_tol or max_steps accepted steps have been
/// taken. The callback sees step 0, every snapshot_every-th step and the
/// final state.
FlowReport run_flow(const HeatFlow& flow, FlowState state, const SnapshotCallback& on_snapshot = {});
FlowReport run_flow(const MapField& u0, const FlowConfig& config, const PropellerRegion& region,
                    const SnapshotCallback& on_snapshot = {});

}  // namespace hmf
