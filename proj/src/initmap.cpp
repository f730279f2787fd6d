#include "hmf/initmap.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include "hmf/errors.hpp"

namespace hmf {

constexpr double kPi = std::numbers::pi;

MapField::MapField(std::shared_ptr<const SurfaceMesh> mesh, std::vector<SpherePoint> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (!mesh_) throw InputError("MapField: null mesh");
  if (static_cast<int>(values_.size()) != mesh_->vertex_count()) {
    throw InputError("MapField: value count does not match the mesh vertex count");
  }
}

MapField MapField::constant(std::shared_ptr<const SurfaceMesh> mesh, const SpherePoint& value) {
  const int n = mesh ? mesh->vertex_count() : 0;
  return MapField(std::move(mesh), std::vector<SpherePoint>(n, value));
}

SpherePoint tube_meridian(double t, double half_height) {
  const double a = kPi * (t + half_height) / (2.0 * half_height);
  return project_to_sphere(Vec3(std::sin(a), 0.0, -std::cos(a)));
}

MapField build_u0(std::shared_ptr<const SurfaceMesh> mesh, const SurfaceParams& params) {
  if (!mesh) throw InputError("build_u0: null mesh");
  const SurfaceParams& mp = mesh->params;
  if (mp.tube_radius != params.tube_radius || mp.tube_half_height != params.tube_half_height ||
      mp.genus_parameter != params.genus_parameter || mesh->tube_count() != params.tube_count()) {
    throw InputError("build_u0: mesh was built from different surface parameters");
  }
  const int m = params.tube_count();
  const double big_r = params.tube_half_height;
  std::vector<SpherePoint> values(mesh->vertex_count());
  for (int v = 0; v < mesh->vertex_count(); ++v) {
    const RegionTag& tag = mesh->tags[v];
    switch (tag.kind) {
      case RegionKind::UpperSphere: values[v] = SpherePoint::north(); break;
      case RegionKind::LowerSphere: values[v] = SpherePoint::south(); break;
      case RegionKind::Junction: values[v] = tag.side > 0 ? SpherePoint::north() : SpherePoint::south(); break;
      case RegionKind::Tube: {
        const double t = mesh->vertices[v].z();
        if (std::abs(t) > big_r * (1.0 + 1e-12)) throw InputError("build_u0: tube vertex outside [-R, R]");
        values[v] = rotate_cyclic(tube_meridian(t, big_r), tag.tube, m);
        break;
      }
    }
  }
  return MapField(std::move(mesh), std::move(values));
}

EnergyReport dirichlet_energy_report(const MapField& field) {
  const CotanOperator op(field.mesh());
  EnergyReport rep{op.energy(field.values()), op.negative_weight_edges()};
  if (rep.negative_weight_edges > 0) {
    std::cerr << "warning: " << rep.negative_weight_edges
              << " mesh edges have negative cotangent weight; energy is not a sum of squares\n";
  }
  return rep;
}

double dirichlet_energy(const MapField& field) { return dirichlet_energy_report(field).energy; }

double dirichlet_energy(const CotanOperator& op, const MapField& field) { return op.energy(field.values()); }

double energy_bound(const SurfaceParams& params) {
  const double r = params.tube_radius;
  return params.tube_count() * kPi * kPi * kPi * r * r / (4.0 * params.tube_half_height);
}

double cylinder_energy(const SurfaceParams& params) {
  return params.tube_count() * kPi * kPi * kPi * params.tube_radius / (2.0 * params.tube_half_height);
}

EquivarianceError check_equivariance(const MapField& field) {
  const SurfaceMesh& mesh = field.mesh();
  const int m = mesh.tube_count();
  EquivarianceError err;
  // Squared chordal maxima are converted to angles once at the end.
  double cyc = 0.0, refl = 0.0;
  const double angle = m > 0 ? 2.0 * kPi / m : 0.0;
  const double c = std::cos(angle), s = std::sin(angle);
  const bool has_cyc = !mesh.cyclic_map.empty(), has_refl = !mesh.z2_map.empty();
  for (int v = 0; v < field.size(); ++v) {
    const Vec3& u = field[v].vec();
    if (has_cyc) {
      const Vec3 want(c * u.x() - s * u.y(), s * u.x() + c * u.y(), u.z());
      cyc = std::max(cyc, (field[mesh.cyclic_map[v]].vec() - want).squaredNorm());
    }
    if (has_refl) {
      const Vec3& w = field[mesh.z2_map[v]].vec();
      refl = std::max(refl, Vec3(w.x() - u.x(), w.y() - u.y(), w.z() + u.z()).squaredNorm());
    }
  }
  err.cyclic = 2.0 * std::asin(std::min(1.0, std::sqrt(cyc) / 2.0));
  err.reflection = 2.0 * std::asin(std::min(1.0, std::sqrt(refl) / 2.0));
  return err;
}

}  // namespace hmf
