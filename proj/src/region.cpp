#include "hmf/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

#include "hmf/errors.hpp"
#include "rng.hpp"

namespace hmf {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

double positive_mod(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

// Orthonormal pair spanning the plane orthogonal to the unit vector n.
std::pair<Vec3, Vec3> tangent_basis(const Vec3& n) {
  const Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = n.cross(helper).normalized();
  return {e1, n.cross(e1)};
}

double geodesic(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

// Distance from c to the minor great-circle arc between unit vectors a, b.
double arc_distance(const Vec3& c, const Vec3& a, const Vec3& b) {
  const Vec3 n = a.cross(b);
  const double nn = n.norm();
  if (nn > 1e-15) {
    const Vec3 u = n / nn;
    const Vec3 foot = c - c.dot(u) * u;
    // The foot projects inside the arc iff it lies between a and b.
    if (foot.norm() > 1e-15 && a.cross(foot).dot(u) >= 0.0 && foot.cross(b).dot(u) >= 0.0) {
      return std::asin(std::min(1.0, std::abs(c.dot(u))));
    }
  }
  return std::min(geodesic(c, a), geodesic(c, b));
}

// Connected components over vertices with keep[i] set, following only the
// edges accepted by `edge_ok`; label is -1 on dropped vertices.
template <class EdgeOk>
int label_components(const std::vector<std::vector<int>>& adjacency, const std::vector<char>& keep,
                     std::vector<int>& label, EdgeOk edge_ok) {
  const int n = static_cast<int>(adjacency.size());
  label.assign(n, -1);
  int count = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (!keep[s] || label[s] >= 0) continue;
    label[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adjacency[v]) {
        if (keep[w] && label[w] < 0 && edge_ok(v, w)) {
          label[w] = count;
          stack.push_back(w);
        }
      }
    }
    ++count;
  }
  return count;
}

}  // namespace

bool EquatorArc::contains_longitude(double longitude, double tol) const {
  const double d = positive_mod(longitude - start);
  return d <= length + tol || d >= kTwoPi - tol;
}

PropellerRegion::PropellerRegion(double epsilon, int arc_count, double phase) : epsilon_(epsilon), phase_(phase) {
  if (!(epsilon > 0.0)) throw InputError("PropellerRegion: epsilon must be positive");
  if (arc_count < 1) throw InputError("PropellerRegion: arc_count must be at least 1");
  const double piece = kPi / arc_count;
  for (int k = 0; k < arc_count; ++k) {
    const double center = phase + piece + kTwoPi * k / arc_count;
    arcs_.push_back({center - 0.5 * piece, piece});
  }
  cache_ends();
}

PropellerRegion::PropellerRegion(double epsilon, std::vector<EquatorArc> arcs, double phase)
    : epsilon_(epsilon), phase_(phase), arcs_(std::move(arcs)) {
  cache_ends();
}

void PropellerRegion::cache_ends() {
  ends_.clear();
  for (const auto& a : arcs_) {
    const double b = a.start + a.length;
    ends_.push_back({Vec3(std::cos(a.start), std::sin(a.start), 0.0), Vec3(std::cos(b), std::sin(b), 0.0)});
  }
}

PropellerRegion PropellerRegion::from_arcs(double epsilon, std::vector<EquatorArc> arcs) {
  if (!(epsilon > 0.0)) throw InputError("PropellerRegion: epsilon must be positive");
  for (const auto& a : arcs) {
    if (!(a.length >= 0.0 && a.length <= kTwoPi)) throw InputError("PropellerRegion: arc length outside [0, 2 pi]");
  }
  return PropellerRegion(epsilon, std::move(arcs), 0.0);
}

double PropellerRegion::distance_to_forbidden(const SpherePoint& q) const {
  const Vec3& v = q.vec();
  const double rho = std::hypot(v.x(), v.y());
  const double lat = std::atan2(v.z(), rho);
  const double lon = rho > 0.0 ? std::atan2(v.y(), v.x()) : 0.0;
  // Outside an arc's longitude range the nearest arc point is an endpoint;
  // the endpoint with the largest dot product is the nearest one overall.
  double inside = std::numeric_limits<double>::infinity();
  double best_dot = -2.0;
  const Vec3* best_end = nullptr;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    if (arcs_[i].contains_longitude(lon)) {
      inside = std::min(inside, std::abs(lat));
      continue;
    }
    for (const Vec3& e : ends_[i]) {
      const double d = v.dot(e);
      if (d > best_dot) best_dot = d, best_end = &e;
    }
  }
  if (best_end) return std::min(inside, geodesic(v, *best_end));
  return inside;
}

bool PropellerRegion::removed_longitude(double longitude, double tol) const {
  return std::any_of(arcs_.begin(), arcs_.end(), [&](const EquatorArc& a) { return a.contains_longitude(longitude, tol); });
}

AntipodalReport antipodal_obstruction_check(const PropellerRegion& region, const std::vector<double>& longitudes) {
  AntipodalReport rep;
  for (double lon : longitudes) {
    ++rep.samples;
    if (!region.removed_longitude(lon + kPi)) rep.witnesses.push_back(lon);
  }
  rep.pass = rep.witnesses.empty();
  return rep;
}

AntipodalReport antipodal_obstruction_check(const PropellerRegion& region, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InputError("antipodal_obstruction_check: n_samples must be at least 1");
  detail::Rng rng(seed);
  std::vector<double> kept;
  kept.reserve(n_samples);
  // Rejection from the full Equator; gives up if nothing is kept.
  const long max_draws = 1000L * n_samples;
  for (long draw = 0; draw < max_draws && static_cast<int>(kept.size()) < n_samples; ++draw) {
    const double lon = rng.uniform(-kPi, kPi);
    if (!region.removed_longitude(lon, 0.0)) kept.push_back(lon);
  }
  return antipodal_obstruction_check(region, kept);
}

CircleTrace trace_great_circle(const PropellerRegion& region, const Vec3& normal, double step) {
  if (!(normal.norm() > 1e-12)) throw InputError("trace_great_circle: zero normal");
  if (!(step > 0.0)) throw InputError("trace_great_circle: step must be positive");
  const auto [e1, e2] = tangent_basis(normal.normalized());
  const int n = static_cast<int>(std::ceil(kTwoPi / step));
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double th = kTwoPi * i / n;
    const Vec3 p = std::cos(th) * e1 + std::sin(th) * e2;
    best = std::min(best, region.distance_to_forbidden(project_to_sphere(p)));
  }
  return {best, region.epsilon() - best};
}

GreatCircleReport great_circle_obstruction_check(const PropellerRegion& region, int n_circles, std::uint64_t seed,
                                                 double step) {
  if (n_circles < 1) throw InputError("great_circle_obstruction_check: n_circles must be at least 1");
  detail::Rng rng(seed);
  std::vector<Vec3> normals(n_circles);
  for (auto& n : normals) n = rng.unit_vector();
  std::vector<double> pen(n_circles);
  // Circles are independent; each worker fills a fixed slice.
  const int workers = std::max(1u, std::min(16u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int c = w; c < n_circles; c += workers) pen[c] = trace_great_circle(region, normals[c], step).penetration;
    });
  }
  for (auto& t : pool) t.join();

  GreatCircleReport rep;
  rep.min_penetration = std::numeric_limits<double>::infinity();
  for (int c = 0; c < n_circles; ++c) {
    ++rep.circles;
    if (!(pen[c] > 0.0)) ++rep.misses;
    if (pen[c] < rep.min_penetration) {
      rep.min_penetration = pen[c];
      rep.worst_normal = normals[c];
    }
  }
  rep.pass = rep.misses == 0;
  return rep;
}

SampleGraph knn_graph(std::vector<SpherePoint> points, int k) {
  const int n = static_cast<int>(points.size());
  if (k < 1) throw InputError("knn_graph: k must be at least 1");
  if (n <= k) throw InputError("knn_graph: need more than k points");
  SampleGraph g;
  g.k = k;
  g.adjacency.assign(n, {});
  std::vector<std::pair<double, int>> cand(n - 1);
  for (int i = 0; i < n; ++i) {
    int c = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) cand[c++] = {(points[i].vec() - points[j].vec()).squaredNorm(), j};
    }
    const int keep = std::min(6 * k, n - 1);
    std::partial_sort(cand.begin(), cand.begin() + keep, cand.end());
    g.ranked.emplace_back();
    for (int a = 0; a < keep; ++a) g.ranked.back().push_back(cand[a].second);
    for (int a = 0; a < k; ++a) {
      g.adjacency[i].push_back(cand[a].second);
      g.adjacency[cand[a].second].push_back(i);
    }
  }
  for (auto& row : g.adjacency) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  g.points = std::move(points);
  return g;
}

std::vector<SpherePoint> sample_ball_union(const std::vector<SpherePoint>& curve, const std::vector<double>& radii,
                                           int n, std::uint64_t seed) {
  if (curve.empty() || curve.size() != radii.size()) throw InputError("sample_ball_union: curve and radii mismatch");
  if (n < 1) throw InputError("sample_ball_union: n must be at least 1");
  std::vector<double> cum(radii.size());
  double total = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] < kPi)) throw InputError("sample_ball_union: radius outside (0, pi)");
    total += 1.0 - std::cos(radii[i]);
    cum[i] = total;
  }
  std::vector<double> cosr(radii.size());
  std::transform(radii.begin(), radii.end(), cosr.begin(), [](double r) { return std::cos(r); });

  detail::Rng rng(seed);
  std::vector<SpherePoint> out;
  out.reserve(n);
  // Mixture of uniform caps, thinned by the cover multiplicity so that the
  // accepted points are uniform on the union.
  while (static_cast<int>(out.size()) < n) {
    const double u = rng.uniform() * total;
    const std::size_t b = std::min<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin(), cum.size() - 1);
    const Vec3& c = curve[b].vec();
    const auto [e1, e2] = tangent_basis(c);
    const double z = 1.0 - rng.uniform() * (1.0 - cosr[b]);
    const double phi = rng.uniform(0.0, kTwoPi);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec3 p = z * c + s * (std::cos(phi) * e1 + std::sin(phi) * e2);
    int cover = 0;
    for (std::size_t j = 0; j < curve.size(); ++j) {
      if (p.dot(curve[j].vec()) >= cosr[j]) ++cover;
    }
    if (cover == 0) cover = 1;  // rounding at the cap boundary
    if (rng.uniform() * cover < 1.0) out.push_back(project_to_sphere(p));
  }
  return out;
}

SweepoutReport check_sweepout_separation(const SampleGraph& samples, const std::vector<SpherePoint>& curve,
                                         const std::vector<double>& radii, const SweepoutOptions& options) {
  if (curve.size() < 3) throw InputError("check_sweepout_separation: curve needs at least 3 points");
  if (curve.size() != radii.size()) throw InputError("check_sweepout_separation: curve and radii sizes differ");
  for (double r : radii) {
    if (!(r > 0.0)) throw InputError("check_sweepout_separation: radii must be positive");
    if (r >= kPi / 2) throw InputError("check_sweepout_separation: radius reaches the convexity radius pi/2");
  }
  const int n = samples.size();
  if (n == 0 || static_cast<int>(samples.adjacency.size()) != n) {
    throw InputError("check_sweepout_separation: empty or malformed sample graph");
  }
  std::vector<int> label;
  if (label_components(samples.adjacency, std::vector<char>(n, 1), label, [](int, int) { return true; }) != 1) {
    throw InputError("check_sweepout_separation: sample graph is disconnected");
  }

  SweepoutReport rep;
  const double margin = std::max(0.0, options.removal_margin);
  rep.removal_margin = margin;
  const int min_comp = options.min_component >= 0 ? options.min_component : std::max(samples.k, n / 200);
  rep.min_component = min_comp;

  std::vector<char> keep(n);
  // Removing the ball leaves thin crescents whose induced kNN subgraph
  // fragments; the remainder is instead linked at the longest kNN edge.
  const bool reform = static_cast<int>(samples.ranked.size()) == n;
  std::vector<std::vector<int>> local(reform ? n : 0);
  double reach = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j : samples.adjacency[i]) reach = std::max(reach, geodesic(samples.points[i].vec(), samples.points[j].vec()));
  }
  rep.link_radius = reach;
  for (std::size_t t = 1; t + 1 < curve.size(); ++t) {
    const Vec3& c = curve[t].vec();
    const double cut = radii[t] + margin;
    for (int i = 0; i < n; ++i) keep[i] = geodesic(samples.points[i].vec(), c) >= cut;
    const std::vector<std::vector<int>>* adj = &samples.adjacency;
    if (reform) {
      for (auto& row : local) row.clear();
      for (int i = 0; i < n; ++i) {
        if (!keep[i]) continue;
        for (int j : samples.ranked[i]) {
          if (j > i && keep[j] && geodesic(samples.points[i].vec(), samples.points[j].vec()) <= reach) {
            local[i].push_back(j);
            local[j].push_back(i);
          }
        }
      }
      adj = &local;
    }
    // An edge whose arc passes through the removed ball does not connect.
    const int count = label_components(*adj, keep, label, [&](int i, int j) {
      return arc_distance(c, samples.points[i].vec(), samples.points[j].vec()) >= cut;
    });
    std::vector<int> size(count, 0);
    for (int i = 0; i < n; ++i) {
      if (label[i] >= 0) ++size[label[i]];
    }

    auto nearest = [&](const Vec3& target) {
      int best = -1;
      double bd = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        if (label[i] < 0) continue;
        const double d = geodesic(samples.points[i].vec(), target);
        if (d < bd) bd = d, best = i;
      }
      return best;
    };
    const int ia = nearest(curve.front().vec());
    const int ib = nearest(curve.back().vec());
    // Slivers cut off where the ball boundary grazes the boundary of the
    // region are sampling noise unless they hold an end of the curve.
    int significant = 0;
    for (int k = 0; k < count; ++k) {
      const bool end = (ia >= 0 && label[ia] == k) || (ib >= 0 && label[ib] == k);
      significant += end || size[k] >= min_comp;
    }
    const bool ok = significant == 2 && ia >= 0 && ib >= 0 && label[ia] != label[ib];
    rep.components.push_back(significant);
    if (!ok && rep.pass) {
      rep.pass = false;
      rep.failing_index = static_cast<int>(t);
      rep.failing_components = significant;
    }
  }
  return rep;
}

}  // namespace hmf
