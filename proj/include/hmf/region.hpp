#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "hmf/sphere.hpp"

namespace hmf {

/// A closed arc of the Equator, from `start` eastward over `length` radians.
struct EquatorArc {
  double start = 0.0;
  double length = 0.0;

  double center() const { return start + 0.5 * length; }
  /// True if the longitude lies on the closed arc, up to `tol` radians.
  bool contains_longitude(double longitude, double tol = 0.0) const;
};

/// Kendall's propeller Omega_eps: the sphere minus the eps-neighbourhoods of
/// m equatorial arcs. The standard layout cuts the Equator into 2m equal
/// pieces and removes every other one, starting at `phase + pi/m`, so kept
/// arcs are centred at phase + 2 pi k / m.
class PropellerRegion {
 public:
  /// Standard layout. Throws InputError for eps <= 0 or m < 1.
  explicit PropellerRegion(double epsilon = 0.05, int arc_count = 3, double phase = 0.0);

  /// Arbitrary removed arcs, for counter-configurations.
  static PropellerRegion from_arcs(double epsilon, std::vector<EquatorArc> arcs);

  double epsilon() const { return epsilon_; }
  int arc_count() const { return static_cast<int>(arcs_.size()); }
  double phase() const { return phase_; }
  const std::vector<EquatorArc>& removed_arcs() const { return arcs_; }

  /// Geodesic distance from q to the nearest closed removed arc.
  double distance_to_forbidden(const SpherePoint& q) const;
  /// distance_to_forbidden(q) >= eps.
  bool contains(const SpherePoint& q) const { return distance_to_forbidden(q) >= epsilon_; }
  /// Signed clearance distance_to_forbidden(q) - eps.
  double margin(const SpherePoint& q) const { return distance_to_forbidden(q) - epsilon_; }

  /// True if the longitude lies on the closed union of removed arcs.
  bool removed_longitude(double longitude, double tol = 1e-12) const;

 private:
  PropellerRegion(double epsilon, std::vector<EquatorArc> arcs, double phase);
  void cache_ends();
  double epsilon_;
  double phase_;
  std::vector<EquatorArc> arcs_;
  std::vector<std::array<Vec3, 2>> ends_;
};

struct AntipodalReport {
  bool pass = true;
  int samples = 0;
  std::vector<double> witnesses;  ///< kept longitudes whose antipode is not removed
};

/// Samples kept Equator points uniformly and checks that each antipode lies
/// on a removed arc.
AntipodalReport antipodal_obstruction_check(const PropellerRegion& region, int n_samples, std::uint64_t seed = 1);
/// The same check at the given kept longitudes.
AntipodalReport antipodal_obstruction_check(const PropellerRegion& region, const std::vector<double>& longitudes);

struct CircleTrace {
  double min_distance = 0.0;  ///< min of distance_to_forbidden along the circle
  double penetration = 0.0;   ///< eps - min_distance; positive means the circle enters a band
};

/// Traces the great circle with the given normal at angular step <= `step`.
CircleTrace trace_great_circle(const PropellerRegion& region, const Vec3& normal, double step = 1e-3);

struct GreatCircleReport {
  bool pass = true;
  int circles = 0;
  int misses = 0;                   ///< circles that never enter a band
  double min_penetration = 0.0;     ///< min over circles of the max penetration
  Vec3 worst_normal = Vec3::UnitZ();
};

/// Traces great circles with uniformly random normals; passes iff every one
/// enters the forbidden set.
GreatCircleReport great_circle_obstruction_check(const PropellerRegion& region, int n_circles, std::uint64_t seed = 1,
                                                 double step = 1e-3);

/// Sample points on S^2 with a symmetric neighbour graph.
struct SampleGraph {
  std::vector<SpherePoint> points;
  std::vector<std::vector<int>> adjacency;
  int k = 0;
  /// Optional nearest-first candidate lists (longer than k), used to link
  /// subsets of the samples at the scale of the longest graph edge.
  std::vector<std::vector<int>> ranked;

  int size() const { return static_cast<int>(points.size()); }
};

/// Symmetrized k-nearest-neighbour graph, keeping the 6k nearest
/// candidates of every point. Throws InputError for k < 1 or fewer than
/// k+1 points.
SampleGraph knn_graph(std::vector<SpherePoint> points, int k = 8);

/// Points uniformly distributed on the union of geodesic balls
/// B(curve[i], radii[i]). Throws InputError on mismatched input.
std::vector<SpherePoint> sample_ball_union(const std::vector<SpherePoint>& curve, const std::vector<double>& radii,
                                           int n, std::uint64_t seed = 1);

struct SweepoutOptions {
  /// Extra removal radius added to every radii[t].
  double removal_margin = 0.0;
  /// Components with fewer samples are treated as noise; negative selects
  /// max(k, n / 200).
  int min_component = -1;
};

struct SweepoutReport {
  bool pass = true;
  std::optional<int> failing_index;
  int failing_components = 0;  ///< significant components at the failing index
  double removal_margin = 0.0;
  int min_component = 0;
  double link_radius = 0.0;
  std::vector<int> components;  ///< significant components per interior index
};

/// For every interior curve index t, removes the samples within
/// radii[t] + margin of curve[t], links the remaining samples that lie
/// within the longest graph edge of each other when candidate lists are
/// present (otherwise keeps the induced subgraph), drops every link whose
/// arc passes through the ball, and checks that the rest splits into
/// exactly two significant components, one holding the remaining sample
/// nearest curve.front() and the other the one nearest curve.back().
/// A component is significant if it holds one of those two samples or has
/// at least min_component samples.
/// Throws InputError if the graph is disconnected, the curve has fewer than
/// three points, sizes differ, or a radius reaches the convexity radius pi/2.
SweepoutReport check_sweepout_separation(const SampleGraph& samples, const std::vector<SpherePoint>& curve,
                                         const std::vector<double>& radii, const SweepoutOptions& options = {});

}  // namespace hmf
