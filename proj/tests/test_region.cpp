#include <cmath>
#include <numbers>
#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "hmf/errors.hpp"
#include "hmf/region.hpp"

using namespace hmf;
using std::numbers::pi;

namespace {

SpherePoint random_point(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return project_to_sphere(Vec3(g(rng), g(rng), g(rng)));
}

// Brute-force distance to the removed arcs: the minimum chordal distance to
// `total` points spread evenly over the arcs, converted to an angle.
double sampled_arc_distance(const std::vector<EquatorArc>& arcs, const Vec3& q, int total) {
  double len = 0.0;
  for (const auto& a : arcs) len += a.length;
  double best = 4.0;
  for (const auto& a : arcs) {
    const int n = std::max(2, static_cast<int>(std::lround(total * a.length / len)));
    for (int i = 0; i < n; ++i) {
      const double lon = a.start + a.length * i / (n - 1);
      best = std::min(best, (Vec3(std::cos(lon), std::sin(lon), 0.0) - q).norm());
    }
  }
  return 2.0 * std::asin(best / 2.0);
}

std::vector<SpherePoint> arc_curve(int n, bool closed) {
  std::vector<SpherePoint> curve;
  for (int i = 0; i < n; ++i) curve.push_back(equator_point(closed ? 2 * pi * i / n : 0.5 * pi * i / (n - 1)));
  return curve;
}

SweepoutReport sweep(bool closed, std::uint64_t seed, int samples = 10000) {
  const auto curve = arc_curve(50, closed);
  const std::vector<double> radii(curve.size(), 0.2);
  return check_sweepout_separation(knn_graph(sample_ball_union(curve, radii, samples, seed), 8), curve, radii);
}

}  // namespace

TEST_CASE("removed arcs alternate with kept arcs") {
  const PropellerRegion region;
  REQUIRE(region.arc_count() == 3);
  for (int k = 0; k < 3; ++k) {
    const EquatorArc& a = region.removed_arcs()[k];
    CHECK(a.length == doctest::Approx(pi / 3));
    CHECK(wrap_angle(a.center()) == doctest::Approx(wrap_angle(pi / 3 + 2 * pi * k / 3)));
  }
  CHECK(region.removed_longitude(pi / 3));
  CHECK(region.removed_longitude(pi));
  CHECK_FALSE(region.removed_longitude(0.0));
  CHECK_FALSE(region.removed_longitude(2 * pi / 3));
  CHECK(region.removed_longitude(pi / 6));  // endpoints are removed
}

TEST_CASE("distance to the forbidden set: examples") {
  const PropellerRegion region(0.05);
  CHECK(region.distance_to_forbidden(SpherePoint::north()) == doctest::Approx(pi / 2).epsilon(1e-12));
  CHECK(region.distance_to_forbidden(SpherePoint::south()) == doctest::Approx(pi / 2).epsilon(1e-12));
  CHECK(region.distance_to_forbidden(equator_point(pi / 3)) == doctest::Approx(0.0));
  // Centre of a kept arc: pi/6 to the nearest endpoint.
  CHECK(region.distance_to_forbidden(equator_point(0.0)) == doctest::Approx(pi / 6).epsilon(1e-12));
  // Directly above a removed arc: the latitude.
  const SpherePoint above = project_to_sphere(Vec3(std::cos(pi / 3), std::sin(pi / 3), std::tan(0.2)));
  CHECK(region.distance_to_forbidden(above) == doctest::Approx(0.2).epsilon(1e-12));

  CHECK(region.contains(SpherePoint::north()));
  CHECK(region.contains(equator_point(0.0)));
  CHECK_FALSE(region.contains(equator_point(pi / 3)));
  const SpherePoint inside_band = project_to_sphere(Vec3(std::cos(pi / 3), std::sin(pi / 3), std::tan(0.025)));
  CHECK_FALSE(region.contains(inside_band));
  CHECK(region.margin(SpherePoint::north()) == doctest::Approx(pi / 2 - 0.05));
}

TEST_CASE("distance to the forbidden set matches dense arc sampling") {
  std::mt19937_64 rng(21);
  for (double phase : {0.0, 0.4}) {
    const PropellerRegion region(0.05, 3, phase);
    for (int i = 0; i < 200; ++i) {
      const SpherePoint q = random_point(rng);
      const double oracle = sampled_arc_distance(region.removed_arcs(), q.vec(), 100000);
      CHECK(std::abs(region.distance_to_forbidden(q) - oracle) < 1e-4);
    }
    // Points close to the Equator, where the two branches meet.
    for (int i = 0; i < 200; ++i) {
      const double lon = std::uniform_real_distribution<double>(-pi, pi)(rng);
      const double lat = std::uniform_real_distribution<double>(-0.1, 0.1)(rng);
      const SpherePoint q = project_to_sphere(Vec3(std::cos(lon), std::sin(lon), std::tan(lat)));
      const double oracle = sampled_arc_distance(region.removed_arcs(), q.vec(), 100000);
      CHECK(std::abs(region.distance_to_forbidden(q) - oracle) < 1e-4);
    }
  }
}

TEST_CASE("region is invariant under the target symmetries") {
  const PropellerRegion region(0.05);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 2000; ++i) {
    const SpherePoint q = random_point(rng);
    const double d = region.distance_to_forbidden(q);
    CHECK(std::abs(region.distance_to_forbidden(z3_rotate(q, 1)) - d) < 1e-12);
    CHECK(std::abs(region.distance_to_forbidden(z3_rotate(q, 2)) - d) < 1e-12);
    CHECK(region.distance_to_forbidden(z2_reflect(q)) == doctest::Approx(d).epsilon(1e-14));
    CHECK(region.contains(z2_reflect(q)) == region.contains(q));
  }
}

TEST_CASE("distance to the forbidden set is 1-Lipschitz") {
  const PropellerRegion region(0.05);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 5000; ++i) {
    const SpherePoint a = random_point(rng);
    const SpherePoint b = i % 2 ? random_point(rng)
                                : project_to_sphere(a.vec() + 0.01 * random_point(rng).vec());
    const double lhs = std::abs(region.distance_to_forbidden(a) - region.distance_to_forbidden(b));
    CHECK(lhs <= sphere_geodesic_distance(a, b) + 1e-12);
  }
}

TEST_CASE("region construction errors") {
  CHECK_THROWS_AS(PropellerRegion(0.0), InputError);
  CHECK_THROWS_AS(PropellerRegion(-1.0), InputError);
  CHECK_THROWS_AS(PropellerRegion(0.05, 0), InputError);
  CHECK_THROWS(PropellerRegion::from_arcs(0.05, {{0.0, 7.0}}));
}

TEST_CASE("antipodal obstruction") {
  for (double eps : {0.01, 0.05, 0.1}) {
    const AntipodalReport rep = antipodal_obstruction_check(PropellerRegion(eps), 10000, 3);
    CHECK(rep.pass);
    CHECK(rep.samples == 10000);
    CHECK(rep.witnesses.empty());
  }
  SUBCASE("five alternating arcs also pass") {
    CHECK(antipodal_obstruction_check(PropellerRegion(0.05, 5), 10000).pass);
  }
  SUBCASE("explicit longitudes") {
    const PropellerRegion region(0.05);
    CHECK(antipodal_obstruction_check(region, std::vector<double>{0.0, 2 * pi / 3, -2 * pi / 3, 0.1}).pass);
  }
  SUBCASE("adjacent removed arcs leave antipodal kept points") {
    // Removed [0, pi/3], [pi/3, 2pi/3], [4pi/3, 5pi/3]; longitude 5.5 and its
    // antipode 5.5 - pi are both kept.
    const PropellerRegion bad = PropellerRegion::from_arcs(0.05, {{0.0, pi / 3}, {pi / 3, pi / 3}, {4 * pi / 3, pi / 3}});
    CHECK_FALSE(antipodal_obstruction_check(bad, std::vector<double>{5.5}).pass);
    const AntipodalReport rep = antipodal_obstruction_check(bad, 10000);
    CHECK_FALSE(rep.pass);
    REQUIRE_FALSE(rep.witnesses.empty());
    for (double lon : rep.witnesses) {
      CHECK_FALSE(bad.removed_longitude(lon));
      CHECK_FALSE(bad.removed_longitude(lon + pi));
    }
  }
}

TEST_CASE("great circle tracing") {
  const PropellerRegion region(0.05);
  // The Equator runs through every removed arc.
  const CircleTrace eq = trace_great_circle(region, Vec3::UnitZ());
  CHECK(eq.min_distance == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eq.penetration == doctest::Approx(0.05));
  // The meridian plane y = 0 crosses the Equator at longitudes 0 (kept,
  // distance pi/6) and pi (centre of a removed arc).
  const CircleTrace mer = trace_great_circle(region, Vec3::UnitY());
  CHECK(mer.min_distance < 1e-3);
  // The meridian plane through longitude pi/2 +- pi meets the Equator at
  // pi/2 (endpoint) and -pi/2 (kept centre, pi/6 away).
  const CircleTrace mer2 = trace_great_circle(region, Vec3::UnitX());
  CHECK(mer2.min_distance < 1e-3);
  CHECK_THROWS_AS(trace_great_circle(region, Vec3::Zero()), InputError);
  CHECK_THROWS_AS(trace_great_circle(region, Vec3::UnitZ(), 0.0), InputError);
}

TEST_CASE("every sampled great circle enters a band") {
  const GreatCircleReport rep = great_circle_obstruction_check(PropellerRegion(0.05), 2000, 4);
  CHECK(rep.pass);
  CHECK(rep.circles == 2000);
  CHECK(rep.misses == 0);
  CHECK(rep.min_penetration > 0.0);
}

TEST_CASE("a wider kept gap admits a great circle") {
  // Two short removed arcs leave room for a tilted great circle that stays
  // away from both of them.
  const PropellerRegion sparse = PropellerRegion::from_arcs(0.05, {{0.0, 0.2}, {pi, 0.2}});
  const CircleTrace gap = trace_great_circle(sparse, Vec3(std::cos(0.1), std::sin(0.1), 0.0));
  // The plane with normal at longitude 0.1 crosses the Equator at 0.1 +- pi/2,
  // far from both arcs.
  CHECK(gap.penetration < 0.0);
  CHECK_FALSE(great_circle_obstruction_check(sparse, 2000, 4).pass);
}

TEST_CASE("ball union sampling") {
  const auto curve = arc_curve(20, false);
  const std::vector<double> radii(curve.size(), 0.2);
  const auto pts = sample_ball_union(curve, radii, 5000, 2);
  REQUIRE(pts.size() == 5000);
  for (const auto& q : pts) {
    double best = 10.0;
    for (const auto& c : curve) best = std::min(best, sphere_geodesic_distance(q, c));
    CHECK(best <= 0.2 + 1e-12);
  }
  // Same seed, same samples.
  const auto again = sample_ball_union(curve, radii, 5000, 2);
  CHECK(again == pts);
}

TEST_CASE("k-nearest-neighbour graph") {
  std::vector<SpherePoint> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(equator_point(0.1 * i));
  const SampleGraph g = knn_graph(pts, 2);
  REQUIRE(g.size() == 10);
  for (int i = 0; i < 10; ++i) {
    for (int j : g.adjacency[i]) {
      CHECK(j != i);
      CHECK(std::find(g.adjacency[j].begin(), g.adjacency[j].end(), i) != g.adjacency[j].end());
    }
  }
  // Interior points link to both neighbours on the line.
  CHECK(std::find(g.adjacency[5].begin(), g.adjacency[5].end(), 4) != g.adjacency[5].end());
  CHECK(std::find(g.adjacency[5].begin(), g.adjacency[5].end(), 6) != g.adjacency[5].end());
}

TEST_CASE("sweep-out separation: arc passes, closed loop fails") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    CAPTURE(seed);
    const SweepoutReport open = sweep(false, seed);
    CHECK(open.pass);
    CHECK_FALSE(open.failing_index.has_value());
    const SweepoutReport closed = sweep(true, seed);
    CHECK_FALSE(closed.pass);
    REQUIRE(closed.failing_index.has_value());
    CHECK(closed.failing_components != 2);
  }
}

TEST_CASE("sweep-out preconditions") {
  const auto curve = arc_curve(50, false);
  const std::vector<double> radii(curve.size(), 0.2);
  const SampleGraph g = knn_graph(sample_ball_union(curve, radii, 2000, 1), 8);
  CHECK_THROWS_AS(check_sweepout_separation(g, {curve[0], curve[1]}, {0.2, 0.2}), InputError);
  CHECK_THROWS_AS(check_sweepout_separation(g, curve, std::vector<double>(3, 0.2)), InputError);
  CHECK_THROWS_AS(check_sweepout_separation(g, curve, std::vector<double>(curve.size(), 0.0)), InputError);
  CHECK_THROWS_AS(check_sweepout_separation(g, curve, std::vector<double>(curve.size(), 2.0)), InputError);
  // Two far-apart clusters cannot form a connected graph.
  std::vector<SpherePoint> split;
  for (int i = 0; i < 20; ++i) split.push_back(equator_point(1e-3 * i));
  for (int i = 0; i < 20; ++i) split.push_back(equator_point(2.0 + 1e-3 * i));
  CHECK_THROWS_AS(check_sweepout_separation(knn_graph(split, 3), curve, radii), InputError);
}
