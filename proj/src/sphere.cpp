#include "hmf/sphere.hpp"

#include <cmath>
#include <numbers>

#include "hmf/errors.hpp"

namespace hmf {

SpherePoint SpherePoint::from_unit(const Vec3& v) {
  if (std::abs(v.norm() - 1.0) > 1e-12) {
    throw InputError("SpherePoint::from_unit: vector is not unit length");
  }
  return SpherePoint(v);
}

double SpherePoint::longitude() const {
  if (v_.x() == 0.0 && v_.y() == 0.0) return 0.0;
  return std::atan2(v_.y(), v_.x());
}

double SpherePoint::latitude() const {
  return std::atan2(v_.z(), std::hypot(v_.x(), v_.y()));
}

double sphere_geodesic_distance(const SpherePoint& a, const SpherePoint& b) {
  // atan2 form of arccos(<a,b>), accurate near 0 and pi.
  return std::atan2(a.vec().cross(b.vec()).norm(), a.vec().dot(b.vec()));
}

SpherePoint project_to_sphere(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 1e-12)) {
    throw DegenerateProjection("degenerate projection: |v| <= 1e-12 cannot be normalized");
  }
  return SpherePoint(v / n);
}

SpherePoint equator_point(double longitude) {
  return project_to_sphere(Vec3(std::cos(longitude), std::sin(longitude), 0.0));
}

Vec3 rotate_cyclic(const Vec3& v, int k, int order) {
  int kk = k % order;
  if (kk < 0) kk += order;
  if (kk == 0) return v;
  const double angle = 2.0 * std::numbers::pi * kk / order;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return Vec3(c * v.x() - s * v.y(), s * v.x() + c * v.y(), v.z());
}

SpherePoint rotate_cyclic(const SpherePoint& q, int k, int order) {
  return project_to_sphere(rotate_cyclic(q.vec(), k, order));
}

SpherePoint z2_reflect(const SpherePoint& q) { return project_to_sphere(z2_reflect(q.vec())); }

SpherePoint antipode(const SpherePoint& q) { return project_to_sphere(-q.vec()); }

SpherePoint geodesic_midpoint(const SpherePoint& a, const SpherePoint& b) {
  return project_to_sphere(a.vec() + b.vec());
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

}  // namespace hmf
