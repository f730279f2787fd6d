#include "convex_hull.hpp"

#include <cstdint>
#include <unordered_map>

#include "hmf/errors.hpp"

namespace hmf::detail {
namespace {

struct Face {
  std::array<int, 3> v;
  Vec3 normal;
  bool alive = true;
};

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

class Hull {
 public:
  explicit Hull(const std::vector<Vec3>& p) : pts_(p) {}

  std::vector<std::array<int, 3>> run() {
    const int n = static_cast<int>(pts_.size());
    if (n < 4) throw ConstructionError("convex hull needs at least 4 points");
    const auto seed = initial_simplex();
    std::vector<char> used(n, 0);
    for (int i : seed) used[i] = 1;
    for (int i = 0; i < n; ++i) {
      if (!used[i]) insert(i);
    }
    std::vector<std::array<int, 3>> out;
    for (const Face& f : faces_) {
      if (f.alive) out.push_back(f.v);
    }
    return out;
  }

 private:
  double height(const Face& f, int p) const { return f.normal.dot(pts_[p] - pts_[f.v[0]]); }

  int add_face(int a, int b, int c) {
    Face f;
    f.v = {a, b, c};
    f.normal = (pts_[b] - pts_[a]).cross(pts_[c] - pts_[a]);
    const int id = static_cast<int>(faces_.size());
    faces_.push_back(f);
    edges_[edge_key(a, b)] = id;
    edges_[edge_key(b, c)] = id;
    edges_[edge_key(c, a)] = id;
    return id;
  }

  std::array<int, 4> initial_simplex() {
    const int n = static_cast<int>(pts_.size());
    int a = 0, b = 0, c = -1, d = -1;
    double best = -1.0;
    for (int i = 1; i < n; ++i) {
      const double dd = (pts_[i] - pts_[a]).squaredNorm();
      if (dd > best) best = dd, b = i;
    }
    best = -1.0;
    const Vec3 ab = pts_[b] - pts_[a];
    for (int i = 0; i < n; ++i) {
      const double dd = ab.cross(pts_[i] - pts_[a]).squaredNorm();
      if (dd > best) best = dd, c = i;
    }
    best = -1.0;
    const Vec3 nrm = ab.cross(pts_[c] - pts_[a]);
    for (int i = 0; i < n; ++i) {
      const double dd = std::abs(nrm.dot(pts_[i] - pts_[a]));
      if (dd > best) best = dd, d = i;
    }
    if (best <= 1e-14) throw ConstructionError("convex hull input is degenerate (coplanar)");
    if (nrm.dot(pts_[d] - pts_[a]) > 0.0) std::swap(b, c);
    // a, b, c now wind clockwise seen from d, i.e. outward.
    add_face(a, b, c);
    add_face(a, d, b);
    add_face(b, d, c);
    add_face(c, d, a);
    return {a, b, c, d};
  }

  void insert(int p) {
    int start = -1;
    for (int i = static_cast<int>(faces_.size()) - 1; i >= 0; --i) {
      if (faces_[i].alive && height(faces_[i], p) > 0.0) {
        start = i;
        break;
      }
    }
    if (start < 0) throw ConstructionError("convex hull: point is not in convex position");

    // Flood the visible region; it is connected.
    std::vector<int> visible{start};
    std::unordered_map<int, char> state{{start, 1}};
    for (std::size_t q = 0; q < visible.size(); ++q) {
      const Face& f = faces_[visible[q]];
      for (int e = 0; e < 3; ++e) {
        const int nb = edges_.at(edge_key(f.v[(e + 1) % 3], f.v[e]));
        if (state.count(nb)) continue;
        const bool vis = height(faces_[nb], p) > 0.0;
        state[nb] = vis ? 1 : 0;
        if (vis) visible.push_back(nb);
      }
    }

    std::vector<std::pair<int, int>> horizon;
    for (int fi : visible) {
      const Face& f = faces_[fi];
      for (int e = 0; e < 3; ++e) {
        const int a = f.v[e], b = f.v[(e + 1) % 3];
        const int nb = edges_.at(edge_key(b, a));
        if (state.at(nb) == 0) horizon.emplace_back(a, b);
      }
    }
    for (int fi : visible) {
      Face& f = faces_[fi];
      f.alive = false;
      for (int e = 0; e < 3; ++e) edges_.erase(edge_key(f.v[e], f.v[(e + 1) % 3]));
    }
    for (const auto& [a, b] : horizon) add_face(a, b, p);
  }

  const std::vector<Vec3>& pts_;
  std::vector<Face> faces_;
  std::unordered_map<std::uint64_t, int> edges_;
};

}  // namespace

std::vector<std::array<int, 3>> convex_hull(const std::vector<Vec3>& points) {
  return Hull(points).run();
}

}  // namespace hmf::detail
