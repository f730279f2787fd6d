#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hmf/errors.hpp"
#include "hmf/initmap.hpp"

using namespace hmf;
using std::numbers::pi;

namespace {

std::shared_ptr<const SurfaceMesh> mesh_for(const SurfaceParams& p) {
  return std::make_shared<const SurfaceMesh>(build_surface(p));
}

// Continuum energy of u0 on m straight cylinders by midpoint quadrature of
// 1/2 |d gamma/dt|^2 over the tube height, gamma differentiated by central
// differences. u0 does not depend on the angle around a tube.
double cylinder_energy_quadrature(double r, double big_r, int m) {
  auto gamma = [big_r](double t) {
    const double a = pi * (t + big_r) / (2 * big_r);
    return Vec3(std::sin(a), 0.0, -std::cos(a));
  };
  const int n = 20000;
  const double h = 2 * big_r / n, fd = 1e-5;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = -big_r + (i + 0.5) * h;
    const Vec3 d = (gamma(t + fd) - gamma(t - fd)) / (2 * fd);
    sum += 0.5 * d.squaredNorm() * h;
  }
  return m * 2 * pi * r * sum;
}

}  // namespace

TEST_CASE("tube meridian endpoints") {
  CHECK((tube_meridian(-5.0, 5.0).vec() - Vec3(0, 0, -1)).norm() < 1e-15);
  CHECK((tube_meridian(5.0, 5.0).vec() - Vec3(0, 0, 1)).norm() < 1e-15);
  CHECK((tube_meridian(0.0, 5.0).vec() - Vec3(1, 0, 0)).norm() < 1e-15);
  CHECK(tube_meridian(2.5, 5.0).latitude() == doctest::Approx(pi / 4));
}

TEST_CASE("initial map values") {
  SurfaceParams params;
  params.resolution = 1;
  const auto mesh = mesh_for(params);
  const MapField u0 = build_u0(mesh, params);
  REQUIRE(u0.size() == mesh->vertex_count());
  for (int v = 0; v < u0.size(); ++v) {
    const RegionTag& tag = mesh->tags[v];
    if (tag.kind == RegionKind::UpperSphere) CHECK(u0[v] == SpherePoint::north());
    if (tag.kind == RegionKind::LowerSphere) CHECK(u0[v] == SpherePoint::south());
  }
  for (int k = 0; k < 3; ++k) {
    const Vec3 want(std::cos(2 * pi * k / 3), std::sin(2 * pi * k / 3), 0.0);
    for (int v : mesh->waists[k]) CHECK((u0[v].vec() - want).norm() < 1e-15);
  }
}

TEST_CASE("initial map is equivariant") {
  SurfaceParams params;
  params.resolution = 1;
  const auto mesh = mesh_for(params);
  MapField u0 = build_u0(mesh, params);
  const EquivarianceError err = check_equivariance(u0);
  CHECK(err.cyclic <= 1e-12);
  CHECK(err.reflection <= 1e-12);

  SUBCASE("a perturbation is detected") {
    const double delta = 1e-6;
    const int v = mesh->waists[1][3];
    u0.mutable_values()[v] = project_to_sphere(u0[v].vec() + Vec3(0, 0, delta));
    CHECK(check_equivariance(u0).max() >= delta / 2);
  }
  SUBCASE("a random field is far from equivariant") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (auto& q : u0.mutable_values()) q = project_to_sphere(Vec3(g(rng), g(rng), g(rng)));
    CHECK(check_equivariance(u0).max() > 1.0);
  }
}

TEST_CASE("build_u0 rejects mismatched parameters") {
  SurfaceParams params;
  params.resolution = 1;
  const auto mesh = mesh_for(params);
  SurfaceParams other = params;
  other.tube_radius = 0.2;
  CHECK_THROWS_AS(build_u0(mesh, other), InputError);
  CHECK_THROWS_AS(MapField(mesh, std::vector<SpherePoint>(3)), InputError);
}

TEST_CASE("energy of constant maps vanishes") {
  SurfaceParams params;
  params.resolution = 1;
  const auto mesh = mesh_for(params);
  CHECK(dirichlet_energy(MapField::constant(mesh, SpherePoint::north())) == 0.0);
  CHECK(dirichlet_energy(MapField::constant(mesh, equator_point(1.0))) < 1e-28);
}

TEST_CASE("energy bound constants") {
  SurfaceParams params;  // r = 0.1, R = 5, p = 1
  CHECK(energy_bound(params) == doctest::Approx(0.04650941502044972).epsilon(1e-12));
  CHECK(energy_bound(params) < 4 * pi / 100);
  params.tube_half_height = 10.0;
  CHECK(energy_bound(params) == doctest::Approx(0.023254707510224862).epsilon(1e-12));
  params.genus_parameter = 2;
  CHECK(energy_bound(params) == doctest::Approx(5 * 0.023254707510224862 / 3).epsilon(1e-12));
  params.genus_parameter = 1;
  params.tube_radius = 1e-4;
  CHECK(energy_bound(params) < 1e-7);
  params = {};
  CHECK(cylinder_energy(params) == doctest::Approx(0.9301883004089945).epsilon(1e-12));
}

TEST_CASE("discrete energy of u0 approaches the cylinder quadrature") {
  SurfaceParams params;
  const double oracle = cylinder_energy_quadrature(params.tube_radius, params.tube_half_height, 3);
  CHECK(oracle == doctest::Approx(cylinder_energy(params)).epsilon(1e-8));
  double prev_err = 1e9;
  for (int level : {1, 2, 3}) {
    params.resolution = level;
    const auto mesh = mesh_for(params);
    const EnergyReport rep = dirichlet_energy_report(build_u0(mesh, params));
    const double err = std::abs(rep.energy - oracle) / oracle;
    CAPTURE(level);
    CAPTURE(rep.energy);
    CHECK(rep.energy > 0.0);
    CHECK(err < 0.02);
    CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("doubling the tube length halves the energy") {
  SurfaceParams params;
  params.resolution = 1;
  const double e5 = dirichlet_energy(build_u0(mesh_for(params), params));
  params.tube_half_height = 10.0;
  const double e10 = dirichlet_energy(build_u0(mesh_for(params), params));
  CHECK(e10 / e5 == doctest::Approx(0.5).epsilon(0.05));
  params.tube_half_height = 2.0;
  const double e2 = dirichlet_energy(build_u0(mesh_for(params), params));
  CHECK(e2 > e5);
}

TEST_CASE("energy is invariant under target isometries") {
  SurfaceParams params;
  params.resolution = 1;
  const auto mesh = mesh_for(params);
  const MapField u0 = build_u0(mesh, params);
  MapField rotated = u0, reflected = u0;
  for (auto& q : rotated.mutable_values()) q = z3_rotate(q, 1);
  for (auto& q : reflected.mutable_values()) q = z2_reflect(q);
  const double e = dirichlet_energy(u0);
  CHECK(dirichlet_energy(rotated) == doctest::Approx(e).epsilon(1e-10));
  CHECK(dirichlet_energy(reflected) == doctest::Approx(e).epsilon(1e-12));
}

TEST_CASE("cotangent weights on the built surface") {
  SurfaceParams params;
  params.resolution = 1;
  const auto mesh = mesh_for(params);
  const CotanOperator op(*mesh);
  CHECK(op.size() == mesh->vertex_count());
  double mass = 0.0;
  for (double m : op.masses()) {
    CHECK(m > 0.0);
    mass += m;
  }
  CHECK(mass == doctest::Approx(total_area(*mesh)).epsilon(1e-12));
  CHECK(op.negative_weight_edges() >= 0);
  // Constant maps have zero Laplacian.
  const MapField c = MapField::constant(mesh, equator_point(0.4));
  for (int i = 0; i < op.size(); i += 97) CHECK(op.laplacian(c.values(), i).norm() < 1e-12);
}
