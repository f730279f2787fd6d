#include "hmf/cotan.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hmf/errors.hpp"

namespace hmf {

CotanOperator::CotanOperator(const SurfaceMesh& mesh) {
  const int nv = mesh.vertex_count();
  mass_.assign(nv, 0.0);
  std::map<std::pair<int, int>, double> edge_weight;
  for (const auto& f : mesh.faces) {
    const Vec3& a = mesh.vertices[f[0]];
    const Vec3& b = mesh.vertices[f[1]];
    const Vec3& c = mesh.vertices[f[2]];
    const double area = 0.5 * (b - a).cross(c - a).norm();
    if (!(area > 0.0)) throw InputError("CotanOperator: degenerate face");
    for (int k = 0; k < 3; ++k) mass_[f[k]] += area / 3.0;
    // Angle at corner k is opposite edge (k+1, k+2).
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = mesh.vertices[f[k]];
      const Vec3 e1 = mesh.vertices[f[(k + 1) % 3]] - p;
      const Vec3 e2 = mesh.vertices[f[(k + 2) % 3]] - p;
      const double cot = e1.dot(e2) / e1.cross(e2).norm();
      edge_weight[std::minmax(f[(k + 1) % 3], f[(k + 2) % 3])] += 0.5 * cot;
    }
  }

  std::vector<std::vector<std::pair<int, double>>> rows(nv);
  for (const auto& [e, w] : edge_weight) {
    if (w < 0.0) ++negative_edges_;
    rows[e.first].emplace_back(e.second, w);
    rows[e.second].emplace_back(e.first, w);
  }
  offsets_.assign(nv + 1, 0);
  for (int i = 0; i < nv; ++i) {
    std::sort(rows[i].begin(), rows[i].end());
    offsets_[i + 1] = offsets_[i] + static_cast<int>(rows[i].size());
    double abs_sum = 0.0;
    for (const auto& [j, w] : rows[i]) {
      neighbors_.push_back(j);
      weights_.push_back(w);
      abs_sum += std::abs(w);
    }
    max_rate_ = std::max(max_rate_, abs_sum / mass_[i]);
  }
}

Vec3 CotanOperator::laplacian(std::span<const SpherePoint> u, int i) const {
  Vec3 acc = Vec3::Zero();
  const Vec3& ui = u[i].vec();
  for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) acc += weights_[k] * (u[neighbors_[k]].vec() - ui);
  return acc / mass_[i];
}

double CotanOperator::energy(std::span<const SpherePoint> u) const {
  double e = 0.0;
  for (int i = 0; i < size(); ++i) {
    const Vec3& ui = u[i].vec();
    for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      const int j = neighbors_[k];
      if (j <= i) continue;
      e += weights_[k] * (ui - u[j].vec()).squaredNorm();
    }
  }
  return 0.5 * e;
}

std::vector<double> CotanOperator::vertex_energy(std::span<const SpherePoint> u) const {
  std::vector<double> e(size(), 0.0);
  for (int i = 0; i < size(); ++i) {
    const Vec3& ui = u[i].vec();
    for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      e[i] += 0.25 * weights_[k] * (ui - u[neighbors_[k]].vec()).squaredNorm();
    }
  }
  return e;
}

}  // namespace hmf
