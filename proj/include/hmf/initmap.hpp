#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hmf/cotan.hpp"
#include "hmf/sphere.hpp"
#include "hmf/surface.hpp"

namespace hmf {

/// A discrete map from the source mesh to S^2: one SpherePoint per vertex.
class MapField {
 public:
  /// Throws InputError if `values` does not have one entry per vertex.
  MapField(std::shared_ptr<const SurfaceMesh> mesh, std::vector<SpherePoint> values);

  /// Constant map.
  static MapField constant(std::shared_ptr<const SurfaceMesh> mesh, const SpherePoint& value);

  const SurfaceMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const SurfaceMesh>& mesh_ptr() const { return mesh_; }
  std::span<const SpherePoint> values() const { return values_; }
  std::vector<SpherePoint>& mutable_values() { return values_; }
  const SpherePoint& operator[](int v) const { return values_[v]; }
  int size() const { return static_cast<int>(values_.size()); }

 private:
  std::shared_ptr<const SurfaceMesh> mesh_;
  std::vector<SpherePoint> values_;
};

/// The meridian from S to N traversed by each tube:
/// t in [-R, R] -> (sin(pi (t+R) / 2R), 0, -cos(pi (t+R) / 2R)).
SpherePoint tube_meridian(double t, double half_height);

/// Initial map: upper sphere and its collars to N, lower ones to S, tube k
/// at height t to the k-th rotation of the meridian. Exactly equivariant.
/// Throws InputError if the mesh was built from different parameters.
MapField build_u0(std::shared_ptr<const SurfaceMesh> mesh, const SurfaceParams& params);

struct EnergyReport {
  double energy = 0.0;
  /// Edges with negative cotangent weight; nonzero means the discrete
  /// energy is not a sum of squares.
  int negative_weight_edges = 0;
};

/// Cotangent Dirichlet energy 1/2 sum w_ij |u_i - u_j|^2. Emits a warning on
/// stderr when the mesh has negative-weight edges.
EnergyReport dirichlet_energy_report(const MapField& field);
double dirichlet_energy(const MapField& field);
double dirichlet_energy(const CotanOperator& op, const MapField& field);

/// Upper bound on E(u0): (2p+1) * pi^3 r^2 / (4R), the per-tube constant
/// multiplied by the tube count.
double energy_bound(const SurfaceParams& params);

/// Exact continuum energy of u0 on straight cylinders of radius r and
/// height 2R: (2p+1) * pi^3 r / (2R). Junction collars contribute nothing.
double cylinder_energy(const SurfaceParams& params);

struct EquivarianceError {
  double cyclic = 0.0;      ///< max_v d(u(cyc(v)), rot(u(v)))
  double reflection = 0.0;  ///< max_v d(u(z2(v)), refl(u(v)))
  double max() const { return cyclic > reflection ? cyclic : reflection; }
};

/// Geodesic deviation of the field from commuting with both symmetries.
EquivarianceError check_equivariance(const MapField& field);

}  // namespace hmf
