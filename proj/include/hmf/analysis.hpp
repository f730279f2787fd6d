#pragma once

#include <map>
#include <optional>
#include <vector>

#include "hmf/cotan.hpp"
#include "hmf/initmap.hpp"
#include "hmf/region.hpp"

namespace hmf {

/// sup_i |tau_i| of the discrete tension field.
double harmonic_residual(const MapField& field);
double harmonic_residual(const CotanOperator& op, const MapField& field);

struct DegreeReport {
  int degree = 0;
  double raw = 0.0;       ///< total signed image area / 4 pi
  double residual = 0.0;  ///< |raw - degree|
};

/// Signed spherical area of the image triangle (a, b, c), in (-2 pi, 2 pi].
double signed_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c);

/// Degree as the total signed image area over 4 pi. Throws ResolutionError
/// when the rounding residual exceeds `max_residual`.
DegreeReport map_degree(const MapField& field, double max_residual = 0.1);

struct ContainmentReport {
  double min_margin = 0.0;           ///< min over vertices and edge midpoints
  double min_vertex_margin = 0.0;
  double min_midpoint_margin = 0.0;
  int worst_vertex = -1;             ///< vertex attaining min_vertex_margin
  std::vector<int> offending_vertices;              ///< margin <= 0
  std::vector<std::pair<int, int>> offending_edges;  ///< midpoint margin <= 0
  std::map<RegionKind, double> margin_by_region;     ///< min vertex margin per tag

  bool contained() const { return min_margin > 0.0; }
};

/// Margins distance_to_forbidden - eps on every vertex image and on the
/// geodesic midpoint of every edge's endpoint images.
ContainmentReport containment(const MapField& field, const PropellerRegion& region);

struct EquatorPointsReport {
  std::vector<int> vertices;     ///< p_1, ..., p_m; p_{i+1} is the cyclic image of p_i
  std::vector<SpherePoint> images;
  double max_equator_deviation = 0.0;  ///< max |z| over all waist images
  double max_permutation_error = 0.0;  ///< max_i |rot(u(p_i)) - u(p_{i+1})|
  bool pass = false;
};

/// Picks on the first waist the fixed vertex of the reflection whose image
/// is closest to the Equator, carries it around with the cyclic map and
/// checks that the images lie on the Equator and are permuted by the target
/// rotation, both within `tol`. Throws InconsistencyError if no fixed waist
/// vertex has an image within `tol` of the Equator.
EquatorPointsReport find_equator_points(const MapField& field, double tol = 1e-6);

/// (8 pi C)^{1/2} (log 1/delta)^{-1/2}. Throws InputError unless C >= 0 and
/// 0 < delta < 1.
double courant_lebesgue_bound(double energy, double delta);

struct CourantLebesgueReport {
  std::optional<double> s_found;  ///< smallest sampled radius meeting the bound
  double lhs = 0.0;               ///< image diameter at s_found, else the smallest diameter seen
  double rhs = 0.0;
  double energy = 0.0;
  bool pass = false;
  std::vector<double> radii;      ///< sampled radii with a nonempty level set
  std::vector<double> diameters;  ///< chordal image diameter of each level set
};

/// Intrinsic graph distances from `source` along mesh edges (Dijkstra).
std::vector<double> mesh_distances(const SurfaceMesh& mesh, int source);

/// Samples `samples` radii log-uniformly in (delta, sqrt(delta)); at each
/// radius s the level set {dist = s} is taken as the points where mesh edges
/// cross it, with images interpolated along the edge and projected to the
/// sphere. Passes iff some level set has chordal image diameter at most
/// courant_lebesgue_bound(C, delta), where C is the field's energy unless
/// `energy` is given. Throws ResolutionError if every level set is empty.
CourantLebesgueReport check_courant_lebesgue(const MapField& field, int center, double delta,
                                             std::optional<double> energy = {}, int samples = 32);

}  // namespace hmf
