#pragma once

#include <array>
#include <vector>

#include "hmf/sphere.hpp"

namespace hmf::detail {

/// Convex hull of points in convex position (e.g. on a sphere), as
/// outward-oriented triangles. Every input point becomes a hull vertex.
/// Inputs with four coplanar points on a common hull facet give an
/// arbitrary triangulation of that facet.
std::vector<std::array<int, 3>> convex_hull(const std::vector<Vec3>& points);

}  // namespace hmf::detail
