#pragma once

#include <span>
#include <vector>

#include "hmf/sphere.hpp"
#include "hmf/surface.hpp"

namespace hmf {

/// Cotangent-weight stiffness matrix and lumped (barycentric) mass of a
/// triangle mesh, stored as symmetric CSR adjacency.
///
/// Edge weight w_ij = (cot a + cot b) / 2 over the two angles opposite the
/// edge. The discrete Dirichlet energy is 1/2 sum_{edges} w_ij |u_i - u_j|^2
/// and (M^-1 L u)_i = (1/m_i) sum_j w_ij (u_j - u_i).
class CotanOperator {
 public:
  explicit CotanOperator(const SurfaceMesh& mesh);

  int size() const { return static_cast<int>(mass_.size()); }
  std::span<const int> neighbors(int i) const {
    return {neighbors_.data() + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
  }
  std::span<const double> weights(int i) const {
    return {weights_.data() + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
  }
  double mass(int i) const { return mass_[i]; }
  const std::vector<double>& masses() const { return mass_; }

  /// Edges whose total cotangent weight is negative (both opposite angles
  /// obtuse enough). The energy is still computed; callers report it.
  int negative_weight_edges() const { return negative_edges_; }

  /// max_i sum_j |w_ij| / m_i; explicit Euler on the heat equation is stable
  /// for dt below its reciprocal.
  double max_rate() const { return max_rate_; }

  /// (M^-1 L u)_i, the mass-normalized Laplacian of ambient coordinates.
  Vec3 laplacian(std::span<const SpherePoint> u, int i) const;

  /// 1/2 sum_{i<j} w_ij |u_i - u_j|^2 in a fixed summation order.
  double energy(std::span<const SpherePoint> u) const;

  /// Per-vertex share of the energy (each edge split evenly between ends).
  std::vector<double> vertex_energy(std::span<const SpherePoint> u) const;

 private:
  std::vector<int> offsets_;
  std::vector<int> neighbors_;
  std::vector<double> weights_;
  std::vector<double> mass_;
  int negative_edges_ = 0;
  double max_rate_ = 0.0;
};

}  // namespace hmf
