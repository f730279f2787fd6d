#pragma once

#include <array>
#include <string>
#include <vector>

#include "hmf/sphere.hpp"

namespace hmf {

/// Shape parameters of the source surface: two unit spheres joined by
/// 2p+1 straight vertical tubes.
struct SurfaceParams {
  double tube_radius = 0.1;       ///< r, in (0, 1)
  double tube_half_height = 5.0;  ///< R, in (1, inf); tubes span z in [-R, R]
  double sphere_gap = 0.1;        ///< d > 0, vertical extent of each junction collar
  double epsilon = 0.05;          ///< band width of the target region, in (0, pi/12)
  int genus_parameter = 1;        ///< p >= 1; tube count 2p+1, genus 2p
  int resolution = 2;             ///< >= 1

  int tube_count() const { return 2 * genus_parameter + 1; }
  int genus() const { return 2 * genus_parameter; }
  /// Vertices around each tube circumference.
  int tube_segments() const { return 8 + 4 * resolution; }

  /// Throws ConstructionError naming the first violated constraint.
  void validate() const;
};

enum class RegionKind { UpperSphere, LowerSphere, Tube, Junction };

struct RegionTag {
  RegionKind kind = RegionKind::UpperSphere;
  int tube = -1;  ///< tube index for Tube and Junction vertices
  int side = 0;   ///< +1 above the symmetry plane, -1 below, 0 on it

  friend bool operator==(const RegionTag&, const RegionTag&) = default;
};

std::string to_string(RegionKind kind);

/// Closed triangle mesh of the genus-2p source surface with the vertex
/// permutations realizing its symmetry group.
struct SurfaceMesh {
  SurfaceParams params;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;  ///< counterclockwise seen from outside
  /// Rotation by 2*pi/(2p+1) about the x3 axis; order 3 for genus 2.
  std::vector<int> cyclic_map;
  /// Reflection z -> -z; swaps the spheres, fixes each waist pointwise.
  std::vector<int> z2_map;
  std::vector<RegionTag> tags;
  /// Waist loop of tube i: the vertex ring at z = 0, in circumferential order.
  std::vector<std::vector<int>> waists;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
  int tube_count() const { return static_cast<int>(waists.size()); }
};

/// Builds the source surface. Throws ConstructionError on invalid params.
SurfaceMesh build_surface(const SurfaceParams& params);

/// Round icosphere with 20 * 4^level faces; used as a test source surface.
/// Symmetry tables and tags are left empty.
SurfaceMesh build_icosphere(int level);

struct TopologyReport {
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int euler_characteristic = 0;
  bool closed = false;    ///< every edge shared by exactly two faces
  bool oriented = false;  ///< every directed edge used exactly once
  double min_face_area = 0.0;
};

TopologyReport mesh_topology(const SurfaceMesh& mesh);

struct SymmetryResidual {
  double cyclic = 0.0;
  double reflection = 0.0;
  double max() const { return cyclic > reflection ? cyclic : reflection; }
};

/// Max positional error of the vertex permutations against the ambient
/// isometries they are meant to realize.
SymmetryResidual mesh_symmetry_residual(const SurfaceMesh& mesh);

/// Checks the permutation invariants (group orders, face preservation,
/// tag behaviour, waist fixing). Returns an empty string when all hold,
/// otherwise a description of the first failure.
std::string check_symmetry_tables(const SurfaceMesh& mesh);

double total_area(const SurfaceMesh& mesh);

}  // namespace hmf
