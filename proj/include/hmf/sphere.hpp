#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace hmf {

using Vec3 = Eigen::Vector3d;

/// A point of the unit sphere S^2 in R^3.
///
/// Instances are only produced by `project_to_sphere` or the named poles,
/// so the unit-norm invariant holds to within floating-point roundoff.
class SpherePoint {
 public:
  SpherePoint() : v_(0.0, 0.0, 1.0) {}

  static SpherePoint north() { return SpherePoint(Vec3(0.0, 0.0, 1.0)); }
  static SpherePoint south() { return SpherePoint(Vec3(0.0, 0.0, -1.0)); }

  /// Wraps a vector already known to be unit length (|v| = 1 within 1e-12).
  /// Throws InputError otherwise.
  static SpherePoint from_unit(const Vec3& v);

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }

  /// Longitude in (-pi, pi]; 0 at the poles.
  double longitude() const;
  /// Latitude in [-pi/2, pi/2].
  double latitude() const;

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

 private:
  explicit SpherePoint(const Vec3& v) : v_(v) {}
  friend SpherePoint project_to_sphere(const Vec3& v);
  Vec3 v_;
};

/// Great-circle distance in [0, pi].
double sphere_geodesic_distance(const SpherePoint& a, const SpherePoint& b);

/// v / |v|. Throws DegenerateProjection when |v| <= 1e-12.
SpherePoint project_to_sphere(const Vec3& v);

/// Point on the Equator at the given longitude.
SpherePoint equator_point(double longitude);

/// Rotation about the x3 axis by 2*pi*k/order.
SpherePoint rotate_cyclic(const SpherePoint& q, int k, int order);
Vec3 rotate_cyclic(const Vec3& v, int k, int order);

/// The order-3 target action: rotation by 2*pi*k/3 about the x3 axis.
inline SpherePoint z3_rotate(const SpherePoint& q, int k) { return rotate_cyclic(q, k, 3); }

/// (x, y, z) -> (x, y, -z).
SpherePoint z2_reflect(const SpherePoint& q);
inline Vec3 z2_reflect(const Vec3& v) { return Vec3(v.x(), v.y(), -v.z()); }

/// -q.
SpherePoint antipode(const SpherePoint& q);

/// Midpoint of the shorter great-circle arc between a and b (a != -b).
SpherePoint geodesic_midpoint(const SpherePoint& a, const SpherePoint& b);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace hmf
