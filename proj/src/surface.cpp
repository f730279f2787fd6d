#include "hmf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "convex_hull.hpp"
#include "rng.hpp"
#include "hmf/errors.hpp"

namespace hmf {
namespace {

constexpr double kPi = std::numbers::pi;

// Ratio of hole chord radius to tube radius.
constexpr double kHoleScale = 1.3;
// Tube ring spacing along the axis, relative to the circumferential spacing.
constexpr double kTubeAspect = 1.5;
// Growth factor of the ring spacing around each hole.
constexpr double kGrading = 1.5;
// Largest admissible tilt of the attachment sites away from the bottom of
// the upper sphere.
const double kMaxTilt = 1.3;

double sphere_spacing(int resolution) { return 0.24 / resolution; }

using Jitter = detail::Rng;

double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

// Frame of attachment site k on the unit sphere centred at the origin.
struct SiteFrame {
  Vec3 center;  // unit normal at the hole centre
  Vec3 radial;  // tangent, horizontal part points away from the x3 axis
  Vec3 tangential;
  Vec3 horizontal;  // unit horizontal direction of the tube axis

  Vec3 point(double rho, double phi) const {
    return std::cos(rho) * center + std::sin(rho) * (std::cos(phi) * radial + std::sin(phi) * tangential);
  }
};

SiteFrame site_frame(double tilt, double longitude) {
  const double ca = std::cos(tilt), sa = std::sin(tilt);
  const double ct = std::cos(longitude), st = std::sin(longitude);
  SiteFrame f;
  f.center = Vec3(sa * ct, sa * st, -ca);
  f.radial = Vec3(ca * ct, ca * st, sa);
  f.tangential = Vec3(-st, ct, 0.0);
  f.horizontal = Vec3(ct, st, 0.0);
  return f;
}

struct Ring {
  double rho;
  std::vector<double> phis;
  std::vector<double> drho;
};

// Concentric rings around a hole, spacing grading from the rim spacing up
// to the background spacing. The rim itself is not included.
std::vector<Ring> grading_rings(double hole_angle, double rim_spacing, double spacing, Jitter& jitter) {
  std::vector<Ring> rings;
  double s = rim_spacing;
  double rho = hole_angle;
  for (int j = 1;; ++j) {
    const double s_next = std::min(spacing, kGrading * s);
    rho += 0.87 * 0.5 * (s + s_next);
    s = s_next;
    Ring ring;
    ring.rho = rho;
    const int count = std::max(6, static_cast<int>(std::lround(2.0 * kPi * std::sin(rho) / s)));
    const double stagger = (j % 2) ? 0.5 : 0.0;
    for (int i = 0; i < count; ++i) {
      ring.phis.push_back(2.0 * kPi * (i + stagger + jitter.symmetric(0.12)) / count);
      ring.drho.push_back(jitter.symmetric(0.08 * s));
    }
    rings.push_back(std::move(ring));
    if (s >= spacing) break;
  }
  return rings;
}

// Unit-sphere triangulation with m holes, exactly invariant under rotation
// by 2*pi/m. Vertices are stored orbit-major: index = k * reps + j for the
// k-th rotation of representative j, followed by the two poles.
struct PerforatedSphere {
  std::vector<Vec3> points;
  std::vector<std::array<int, 3>> faces;
  std::vector<int> rotation;               // cyclic permutation
  std::vector<std::vector<int>> rims;      // per hole, indexed by phi_i
  double tilt = 0.0;
  double hole_angle = 0.0;
  double outer_angle = 0.0;
};

PerforatedSphere perforated_sphere(const SurfaceParams& p) {
  const int m = p.tube_count();
  const int n = p.tube_segments();
  const double hole_chord = kHoleScale * p.tube_radius;
  if (hole_chord >= 0.9) {
    throw ConstructionError("attachment sites overlap: tube radius too large for the unit spheres");
  }
  PerforatedSphere out;
  out.hole_angle = std::asin(hole_chord);
  const double rim_spacing = 2.0 * kPi * hole_chord / n;

  // Adjacent sites must be separated by both ring systems plus a gap, and the
  // bottom pole must stay clear of them. The background spacing shrinks
  // until the sites fit or the rings are no coarser than the rim.
  const std::uint64_t seed =
      0x5eedULL + static_cast<std::uint64_t>(p.resolution) * 7919ULL + static_cast<std::uint64_t>(m) * 104729ULL;
  double h = sphere_spacing(p.resolution);
  std::vector<Ring> rings;
  double sin_tilt = 2.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Jitter jitter(seed);
    rings = grading_rings(out.hole_angle, rim_spacing, h, jitter);
    out.outer_angle = rings.back().rho;
    sin_tilt = std::sin(out.outer_angle + 0.5 * h) / std::sin(kPi / m);
    if (sin_tilt < std::sin(kMaxTilt) || h <= rim_spacing) break;
    h *= 0.85;
  }
  if (sin_tilt >= std::sin(kMaxTilt)) {
    std::ostringstream msg;
    msg << "attachment sites overlap: " << m << " holes of angular radius " << out.hole_angle
        << " do not fit on a unit sphere";
    throw ConstructionError(msg.str());
  }
  out.tilt = std::max(std::asin(sin_tilt), out.outer_angle + 0.75 * h);
  if (out.tilt >= kMaxTilt) throw ConstructionError("attachment sites overlap the pole region");

  const double site_longitude = kPi / m;
  const SiteFrame frame = site_frame(out.tilt, site_longitude);

  // Representatives for rotation index 0. The hole centre is a temporary
  // vertex that forces a fan over each hole; it is removed after the hull.
  // The centre goes first so that no facet spanned by coplanar rim points
  // ever appears during incremental hull construction.
  std::vector<Vec3> reps{frame.center};
  const int center_rep = 0;
  const int rim_rep = 1;
  for (int i = 0; i < n; ++i) reps.push_back(frame.point(out.hole_angle, 2.0 * kPi * i / n));
  for (const Ring& ring : rings) {
    for (std::size_t i = 0; i < ring.phis.size(); ++i) {
      reps.push_back(frame.point(ring.rho + ring.drho[i], ring.phis[i]));
    }
  }

  std::vector<Vec3> accepted;
  for (int k = 0; k < m; ++k) {
    for (const Vec3& v : reps) accepted.push_back(rotate_cyclic(v, k, m));
  }
  accepted.push_back(Vec3(0, 0, 1));
  accepted.push_back(Vec3(0, 0, -1));

  std::vector<Vec3> centers;
  for (int k = 0; k < m; ++k) centers.push_back(rotate_cyclic(frame.center, k, m));

  // Background: Fibonacci lattice restricted to one lune, thinned against
  // all rotated copies.
  const int fib = static_cast<int>(std::ceil(4.0 * kPi / (0.866 * h * h)));
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  const double lune = 2.0 * kPi / m;
  const double min_sep = 0.6 * h;
  for (int i = 0; i < fib; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / fib;
    const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    double lon = std::fmod(golden * i, 2.0 * kPi);
    if (lon >= lune) continue;
    const Vec3 v(rad * std::cos(lon), rad * std::sin(lon), z);
    bool ok = true;
    for (const Vec3& c : centers) {
      if (angle_between(v, c) < out.outer_angle + 0.75 * h) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (int k = 0; k < m && ok; ++k) {
      const Vec3 w = rotate_cyclic(v, k, m);
      for (const Vec3& a : accepted) {
        if ((a - w).norm() < min_sep) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    reps.push_back(v);
    for (int k = 0; k < m; ++k) accepted.push_back(rotate_cyclic(v, k, m));
  }

  const int nrep = static_cast<int>(reps.size());
  std::vector<Vec3> all;
  all.reserve(static_cast<std::size_t>(nrep) * m + 2);
  for (int k = 0; k < m; ++k) {
    for (const Vec3& v : reps) all.push_back(rotate_cyclic(v, k, m));
  }
  all.push_back(Vec3(0, 0, 1));
  all.push_back(Vec3(0, 0, -1));
  const int total = static_cast<int>(all.size());

  auto hull = detail::convex_hull(all);

  // Drop the temporary centres and their fans, then compact indices.
  std::vector<int> remap(total, -1);
  std::vector<char> is_center(total, 0);
  for (int k = 0; k < m; ++k) is_center[k * nrep + center_rep] = 1;
  int next = 0;
  for (int i = 0; i < total; ++i) {
    if (!is_center[i]) remap[i] = next++;
  }
  out.points.reserve(next);
  for (int i = 0; i < total; ++i) {
    if (!is_center[i]) out.points.push_back(all[i]);
  }
  int fan_faces = 0;
  for (const auto& f : hull) {
    if (is_center[f[0]] || is_center[f[1]] || is_center[f[2]]) {
      ++fan_faces;
      continue;
    }
    out.faces.push_back({remap[f[0]], remap[f[1]], remap[f[2]]});
  }
  if (fan_faces != m * n) {
    throw ConstructionError("hole triangulation is not a fan over the rim; resolution too coarse");
  }

  out.rotation.assign(next, -1);
  for (int i = 0; i < total; ++i) {
    if (is_center[i]) continue;
    int img;
    if (i >= m * nrep) {
      img = i;
    } else {
      const int k = i / nrep, j = i % nrep;
      img = ((k + 1) % m) * nrep + j;
    }
    out.rotation[remap[i]] = remap[img];
  }
  out.rims.assign(m, {});
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < n; ++i) out.rims[k].push_back(remap[k * nrep + rim_rep + i]);
  }

  // The hull of a rotation-invariant point set in general position is
  // rotation invariant; confirm it at the face level.
  std::set<std::array<int, 3>> face_set;
  auto canonical = [](std::array<int, 3> f) {
    std::rotate(f.begin(), std::min_element(f.begin(), f.end()), f.end());
    return f;
  };
  for (const auto& f : out.faces) face_set.insert(canonical(f));
  for (const auto& f : out.faces) {
    const std::array<int, 3> g{out.rotation[f[0]], out.rotation[f[1]], out.rotation[f[2]]};
    if (!face_set.count(canonical(g))) {
      throw ConstructionError("sphere triangulation lost its rotational symmetry");
    }
  }
  return out;
}

void add_strip(std::vector<std::array<int, 3>>& faces, const std::vector<int>& upper,
               const std::vector<int>& lower) {
  const int n = static_cast<int>(upper.size());
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    faces.push_back({upper[i], lower[i], lower[j]});
    faces.push_back({upper[i], lower[j], upper[j]});
  }
}

}  // namespace

std::string to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::UpperSphere: return "upper_sphere";
    case RegionKind::LowerSphere: return "lower_sphere";
    case RegionKind::Tube: return "tube";
    case RegionKind::Junction: return "junction";
  }
  return "unknown";
}

void SurfaceParams::validate() const {
  auto fail = [](const std::string& what) { throw ConstructionError("invalid surface parameters: " + what); };
  if (!(tube_radius > 0.0 && tube_radius < 1.0)) fail("tube_radius r must lie in (0, 1)");
  if (!(tube_half_height > 1.0) || !std::isfinite(tube_half_height)) fail("tube_half_height R must lie in (1, inf)");
  if (!(sphere_gap > 0.0) || !std::isfinite(sphere_gap)) fail("sphere_gap d must be positive");
  if (!(epsilon > 0.0 && epsilon < kPi / 12.0)) fail("epsilon must lie in (0, pi/12)");
  if (genus_parameter < 1) fail("genus_parameter p must be a positive integer");
  // m removed arcs of length pi/m, each widened by eps on both sides.
  const int m = tube_count();
  if (m * (kPi / m + 2.0 * epsilon) > 2.0 * kPi) fail("attachment sites overlap: need (2p+1)(pi/(2p+1) + 2 eps) <= 2 pi");
  if (resolution < 1) {
    fail("resolution too coarse: tube circumference needs at least 12 segments (resolution >= 1)");
  }
}

SurfaceMesh build_surface(const SurfaceParams& params) {
  params.validate();
  const int m = params.tube_count();
  const int n = params.tube_segments();
  const double r = params.tube_radius;
  const double big_r = params.tube_half_height;

  const PerforatedSphere sphere = perforated_sphere(params);
  const double hole_angle = sphere.hole_angle;
  const double center_height = big_r + params.sphere_gap + std::cos(sphere.tilt - hole_angle);
  const Vec3 center(0.0, 0.0, center_height);

  // Upper half: sphere, collars, tube rings down to the waist.
  std::vector<Vec3> pos;
  std::vector<RegionTag> tag;
  std::vector<std::array<int, 3>> faces;
  std::vector<int> cyc;

  for (const Vec3& v : sphere.points) {
    pos.push_back(center + v);
    tag.push_back({RegionKind::UpperSphere, -1, +1});
  }
  cyc = sphere.rotation;
  faces = sphere.faces;

  const double seg = 2.0 * kPi * r / n;
  const int half_rings = std::max(2, static_cast<int>(std::ceil(big_r / (kTubeAspect * seg))));
  const SiteFrame frame0 = site_frame(sphere.tilt, kPi / m);
  const double axis_offset = std::sin(sphere.tilt);

  // The shortest collar generator determines the number of collar strips;
  // long thin strips keep bounded cotangent weights, short ones do not.
  double collar_len = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double phi = 2.0 * kPi * i / n;
    const Vec3 rim = center + frame0.point(hole_angle, phi);
    const Vec3 top = axis_offset * frame0.horizontal + Vec3(0, 0, big_r) +
                     r * (std::cos(phi) * frame0.horizontal + std::sin(phi) * frame0.tangential);
    collar_len = std::min(collar_len, (rim - top).norm());
  }
  const int collar_strips = std::max(1, static_cast<int>(std::lround(collar_len / (kTubeAspect * seg))));

  // Per tube: loops[k][0] is the hole rim, then collar rings, then tube
  // rings from z = R down to the waist.
  std::vector<std::vector<std::vector<int>>> loops(m);
  const int first_tube_vertex = static_cast<int>(pos.size());
  const int per_tube = n * (collar_strips - 1) + n * (half_rings + 1);
  for (int k = 0; k < m; ++k) {
    loops[k].push_back(sphere.rims[k]);
    for (int c = 1; c < collar_strips; ++c) {
      const double s = static_cast<double>(c) / collar_strips;
      std::vector<int> loop;
      for (int i = 0; i < n; ++i) {
        const double phi = 2.0 * kPi * i / n;
        const Vec3 rim0 = center + frame0.point(hole_angle, phi);
        const Vec3 top0 = axis_offset * frame0.horizontal + Vec3(0, 0, big_r) +
                          r * (std::cos(phi) * frame0.horizontal + std::sin(phi) * frame0.tangential);
        loop.push_back(static_cast<int>(pos.size()));
        pos.push_back(rotate_cyclic(Vec3((1.0 - s) * rim0 + s * top0), k, m));
        tag.push_back({RegionKind::Junction, k, +1});
      }
      loops[k].push_back(std::move(loop));
    }
    for (int j = 0; j <= half_rings; ++j) {
      const double z = (j == half_rings) ? 0.0 : big_r * (half_rings - j) / half_rings;
      std::vector<int> loop;
      for (int i = 0; i < n; ++i) {
        const double phi = 2.0 * kPi * i / n;
        const Vec3 p0 = axis_offset * frame0.horizontal +
                        r * (std::cos(phi) * frame0.horizontal + std::sin(phi) * frame0.tangential);
        Vec3 v = rotate_cyclic(p0, k, m);
        v.z() = z;
        loop.push_back(static_cast<int>(pos.size()));
        pos.push_back(v);
        tag.push_back({RegionKind::Tube, k, j == half_rings ? 0 : +1});
      }
      loops[k].push_back(std::move(loop));
    }
    for (std::size_t l = 0; l + 1 < loops[k].size(); ++l) add_strip(faces, loops[k][l], loops[k][l + 1]);
  }
  // Non-sphere vertices of tube k map to the same slot of tube k+1.
  cyc.resize(pos.size());
  for (int v = first_tube_vertex; v < static_cast<int>(pos.size()); ++v) {
    const int local = v - first_tube_vertex;
    const int k = local / per_tube;
    cyc[v] = first_tube_vertex + ((k + 1) % m) * per_tube + local % per_tube;
  }

  // Mirror everything off the waist plane.
  const int nh = static_cast<int>(pos.size());
  std::vector<int> mirror(nh, -1);
  SurfaceMesh mesh;
  mesh.params = params;
  mesh.vertices = pos;
  mesh.tags = tag;
  for (int v = 0; v < nh; ++v) {
    if (tag[v].side == 0) {
      mirror[v] = v;
      continue;
    }
    mirror[v] = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(z2_reflect(pos[v]));
    RegionTag t = tag[v];
    t.side = -t.side;
    if (t.kind == RegionKind::UpperSphere) t.kind = RegionKind::LowerSphere;
    mesh.tags.push_back(t);
  }
  mesh.faces = faces;
  for (const auto& f : faces) mesh.faces.push_back({mirror[f[0]], mirror[f[2]], mirror[f[1]]});

  const int nv = mesh.vertex_count();
  mesh.z2_map.assign(nv, -1);
  mesh.cyclic_map.assign(nv, -1);
  for (int v = 0; v < nh; ++v) {
    mesh.z2_map[v] = mirror[v];
    mesh.z2_map[mirror[v]] = v;
    mesh.cyclic_map[v] = cyc[v];
    mesh.cyclic_map[mirror[v]] = mirror[cyc[v]];
  }
  for (int k = 0; k < m; ++k) mesh.waists.push_back(loops[k].back());
  return mesh;
}

SurfaceMesh build_icosphere(int level) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> nf;
    nf.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const int a = midpoint(tri[0], tri[1]);
      const int b = midpoint(tri[1], tri[2]);
      const int c = midpoint(tri[2], tri[0]);
      nf.push_back({tri[0], a, c});
      nf.push_back({tri[1], b, a});
      nf.push_back({tri[2], c, b});
      nf.push_back({a, b, c});
    }
    f = std::move(nf);
  }
  SurfaceMesh mesh;
  mesh.vertices = std::move(v);
  mesh.faces = std::move(f);
  mesh.tags.assign(mesh.vertices.size(), RegionTag{});
  return mesh;
}

TopologyReport mesh_topology(const SurfaceMesh& mesh) {
  TopologyReport rep;
  rep.vertices = mesh.vertex_count();
  rep.faces = mesh.face_count();
  std::map<std::pair<int, int>, int> undirected;
  std::map<std::pair<int, int>, int> directed;
  rep.min_face_area = std::numeric_limits<double>::infinity();
  for (const auto& f : mesh.faces) {
    for (int e = 0; e < 3; ++e) {
      const int a = f[e], b = f[(e + 1) % 3];
      ++undirected[std::minmax(a, b)];
      ++directed[{a, b}];
    }
    const Vec3& p0 = mesh.vertices[f[0]];
    const double area = 0.5 * (mesh.vertices[f[1]] - p0).cross(mesh.vertices[f[2]] - p0).norm();
    rep.min_face_area = std::min(rep.min_face_area, area);
  }
  rep.edges = static_cast<int>(undirected.size());
  rep.euler_characteristic = rep.vertices - rep.edges + rep.faces;
  rep.closed = std::all_of(undirected.begin(), undirected.end(), [](const auto& e) { return e.second == 2; });
  rep.oriented = std::all_of(directed.begin(), directed.end(), [](const auto& e) { return e.second == 1; });
  return rep;
}

SymmetryResidual mesh_symmetry_residual(const SurfaceMesh& mesh) {
  SymmetryResidual res;
  const int m = mesh.tube_count();
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (!mesh.cyclic_map.empty() && m > 0) {
      const Vec3 want = rotate_cyclic(mesh.vertices[v], 1, m);
      res.cyclic = std::max(res.cyclic, (mesh.vertices[mesh.cyclic_map[v]] - want).norm());
    }
    if (!mesh.z2_map.empty()) {
      const Vec3 want = z2_reflect(mesh.vertices[v]);
      res.reflection = std::max(res.reflection, (mesh.vertices[mesh.z2_map[v]] - want).norm());
    }
  }
  return res;
}

std::string check_symmetry_tables(const SurfaceMesh& mesh) {
  const int nv = mesh.vertex_count();
  const int m = mesh.tube_count();
  if (static_cast<int>(mesh.cyclic_map.size()) != nv || static_cast<int>(mesh.z2_map.size()) != nv) {
    return "symmetry tables have the wrong size";
  }
  for (int v = 0; v < nv; ++v) {
    int w = v;
    for (int k = 0; k < m; ++k) w = mesh.cyclic_map[w];
    if (w != v) return "cyclic map does not have order " + std::to_string(m);
    if (mesh.z2_map[mesh.z2_map[v]] != v) return "z2 map is not an involution";
    const RegionTag& t = mesh.tags[v];
    const RegionTag& tc = mesh.tags[mesh.cyclic_map[v]];
    const RegionTag& tz = mesh.tags[mesh.z2_map[v]];
    if (tc.kind != t.kind || tc.side != t.side) return "cyclic map changes a region tag";
    if (t.tube >= 0 && tc.tube != (t.tube + 1) % m) return "cyclic map does not permute tubes cyclically";
    if (tz.tube != t.tube || tz.side != -t.side) return "z2 map does not mirror a tag";
    if ((t.kind == RegionKind::UpperSphere) != (tz.kind == RegionKind::LowerSphere)) {
      return "z2 map does not swap the spheres";
    }
  }
  for (const auto& waist : mesh.waists) {
    for (int v : waist) {
      if (mesh.z2_map[v] != v) return "z2 map moves a waist vertex";
    }
  }
  std::set<std::array<int, 3>> faces;
  auto canonical = [](std::array<int, 3> f) {
    std::rotate(f.begin(), std::min_element(f.begin(), f.end()), f.end());
    return f;
  };
  for (const auto& f : mesh.faces) faces.insert(canonical(f));
  for (const auto& f : mesh.faces) {
    const auto& c = mesh.cyclic_map;
    const auto& z = mesh.z2_map;
    if (!faces.count(canonical({c[f[0]], c[f[1]], c[f[2]]}))) return "cyclic map does not preserve faces";
    if (!faces.count(canonical({z[f[0]], z[f[2]], z[f[1]]}))) return "z2 map does not preserve faces";
  }
  return {};
}

double total_area(const SurfaceMesh& mesh) {
  double area = 0.0;
  for (const auto& f : mesh.faces) {
    const Vec3& p0 = mesh.vertices[f[0]];
    area += 0.5 * (mesh.vertices[f[1]] - p0).cross(mesh.vertices[f[2]] - p0).norm();
  }
  return area;
}

}  // namespace hmf
