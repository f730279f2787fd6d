#include "hmf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "hmf/errors.hpp"
#include "hmf/flow.hpp"

namespace hmf {

constexpr double kPi = std::numbers::pi;

double harmonic_residual(const CotanOperator& op, const MapField& field) { return max_norm(tension_field(op, field)); }

double harmonic_residual(const MapField& field) { return harmonic_residual(CotanOperator(field.mesh()), field); }

double signed_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  // Van Oosterom and Strackee.
  const double num = a.dot(b.cross(c));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

DegreeReport map_degree(const MapField& field, double max_residual) {
  const SurfaceMesh& mesh = field.mesh();
  double total = 0.0;
  for (const auto& f : mesh.faces) total += signed_solid_angle(field[f[0]].vec(), field[f[1]].vec(), field[f[2]].vec());
  DegreeReport rep;
  rep.raw = total / (4.0 * kPi);
  rep.degree = static_cast<int>(std::lround(rep.raw));
  rep.residual = std::abs(rep.raw - rep.degree);
  if (rep.residual > max_residual) {
    throw ResolutionError("map_degree: degree unreliable, rounding residual " + std::to_string(rep.residual));
  }
  return rep;
}

ContainmentReport containment(const MapField& field, const PropellerRegion& region) {
  const SurfaceMesh& mesh = field.mesh();
  ContainmentReport rep;
  rep.min_vertex_margin = std::numeric_limits<double>::infinity();
  rep.min_midpoint_margin = std::numeric_limits<double>::infinity();
  for (int v = 0; v < field.size(); ++v) {
    const double m = region.margin(field[v]);
    if (m < rep.min_vertex_margin) rep.min_vertex_margin = m, rep.worst_vertex = v;
    if (m <= 0.0) rep.offending_vertices.push_back(v);
    if (!mesh.tags.empty()) {
      auto [it, fresh] = rep.margin_by_region.try_emplace(mesh.tags[v].kind, m);
      if (!fresh) it->second = std::min(it->second, m);
    }
  }
  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      const int a = f[k], b = f[(k + 1) % 3];
      if (a > b) continue;  // each interior edge once, from its lower end
      const Vec3 sum = field[a].vec() + field[b].vec();
      // Antipodal endpoint images have no unique midpoint; the edge is then
      // certainly not resolved and counts as offending.
      if (sum.norm() <= 1e-12) {
        rep.min_midpoint_margin = std::min(rep.min_midpoint_margin, -region.epsilon());
        rep.offending_edges.emplace_back(a, b);
        continue;
      }
      const double m = region.margin(project_to_sphere(sum));
      rep.min_midpoint_margin = std::min(rep.min_midpoint_margin, m);
      if (m <= 0.0) rep.offending_edges.emplace_back(a, b);
    }
  }
  if (mesh.faces.empty()) rep.min_midpoint_margin = rep.min_vertex_margin;
  rep.min_margin = std::min(rep.min_vertex_margin, rep.min_midpoint_margin);
  return rep;
}

EquatorPointsReport find_equator_points(const MapField& field, double tol) {
  const SurfaceMesh& mesh = field.mesh();
  const int m = mesh.tube_count();
  if (m == 0 || mesh.cyclic_map.empty() || mesh.z2_map.empty()) {
    throw InputError("find_equator_points: mesh has no waists or symmetry tables");
  }
  EquatorPointsReport rep;
  int start = -1;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& waist : mesh.waists) {
    for (int v : waist) {
      if (mesh.z2_map[v] != v) continue;
      const double z = std::abs(field[v].z());
      rep.max_equator_deviation = std::max(rep.max_equator_deviation, z);
      if (&waist == &mesh.waists.front() && z < best) best = z, start = v;
    }
  }
  if (start < 0 || best >= tol) {
    throw InconsistencyError("find_equator_points: no reflection-fixed waist vertex maps to the Equator");
  }
  int v = start;
  for (int i = 0; i < m; ++i) {
    rep.vertices.push_back(v);
    rep.images.push_back(field[v]);
    v = mesh.cyclic_map[v];
  }
  if (v != start) throw InconsistencyError("find_equator_points: cyclic map does not close up on the waists");
  for (int i = 0; i < m; ++i) {
    const Vec3 want = rotate_cyclic(rep.images[i].vec(), 1, m);
    rep.max_permutation_error = std::max(rep.max_permutation_error, (want - rep.images[(i + 1) % m].vec()).norm());
  }
  rep.pass = rep.max_equator_deviation < tol && rep.max_permutation_error < tol;
  return rep;
}

double courant_lebesgue_bound(double energy, double delta) {
  if (!(energy >= 0.0)) throw InputError("courant_lebesgue_bound: energy must be non-negative");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("courant_lebesgue_bound: delta must lie in (0, 1)");
  return std::sqrt(8.0 * kPi * energy) / std::sqrt(std::log(1.0 / delta));
}

std::vector<double> mesh_distances(const SurfaceMesh& mesh, int source) {
  const int n = mesh.vertex_count();
  if (source < 0 || source >= n) throw InputError("mesh_distances: source vertex out of range");
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      const int a = f[k], b = f[(k + 1) % 3];
      const double len = (mesh.vertices[a] - mesh.vertices[b]).norm();
      adj[a].emplace_back(b, len);
      adj[b].emplace_back(a, len);
    }
  }
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const auto& [w, len] : adj[v]) {
      if (d + len < dist[w]) {
        dist[w] = d + len;
        heap.emplace(dist[w], w);
      }
    }
  }
  return dist;
}

CourantLebesgueReport check_courant_lebesgue(const MapField& field, int center, double delta,
                                             std::optional<double> energy, int samples) {
  if (samples < 1) throw InputError("check_courant_lebesgue: samples must be at least 1");
  CourantLebesgueReport rep;
  rep.energy = energy ? *energy : dirichlet_energy(CotanOperator(field.mesh()), field);
  rep.rhs = courant_lebesgue_bound(rep.energy, delta);

  const SurfaceMesh& mesh = field.mesh();
  const std::vector<double> dist = mesh_distances(mesh, center);
  std::vector<std::pair<int, int>> edges;
  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      const int a = f[k], b = f[(k + 1) % 3];
      if (a < b) edges.emplace_back(a, b);
    }
  }

  const double lo = std::log(delta), hi = 0.5 * std::log(delta);
  double smallest = std::numeric_limits<double>::infinity();
  std::vector<Vec3> level;
  for (int k = 0; k < samples; ++k) {
    const double s = std::exp(lo + (k + 0.5) / samples * (hi - lo));
    level.clear();
    for (const auto& [a, b] : edges) {
      const double da = dist[a], db = dist[b];
      if ((da < s) == (db < s)) continue;
      const double lam = (s - da) / (db - da);
      const Vec3 p = (1.0 - lam) * field[a].vec() + lam * field[b].vec();
      level.push_back(p.norm() > 1e-12 ? Vec3(p.normalized()) : Vec3(field[a].vec()));
    }
    if (level.empty()) continue;
    double diam = 0.0;
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (std::size_t j = i + 1; j < level.size(); ++j) diam = std::max(diam, (level[i] - level[j]).squaredNorm());
    }
    diam = std::sqrt(diam);
    rep.radii.push_back(s);
    rep.diameters.push_back(diam);
    smallest = std::min(smallest, diam);
    if (!rep.s_found && diam <= rep.rhs) {
      rep.s_found = s;
      rep.lhs = diam;
    }
  }
  if (rep.radii.empty()) throw ResolutionError("check_courant_lebesgue: every sampled level set is empty");
  rep.pass = rep.s_found.has_value();
  if (!rep.pass) rep.lhs = smallest;
  return rep;
}

}  // namespace hmf
