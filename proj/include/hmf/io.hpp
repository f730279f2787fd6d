#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hmf/flow.hpp"
#include "hmf/region.hpp"
#include "hmf/surface.hpp"

namespace hmf {

/// Wavefront OBJ, ASCII, 17 significant digits.
void write_obj(const SurfaceMesh& mesh, std::ostream& out);
void write_obj(const SurfaceMesh& mesh, const std::filesystem::path& path);

/// Vertices and triangular faces of an OBJ file; other records are ignored.
/// Throws InputError on malformed vertex or face lines.
SurfaceMesh read_obj(std::istream& in);

struct VtkAttributes {
  std::map<std::string, std::vector<double>> scalars;  ///< one value per vertex
  std::map<std::string, std::vector<Vec3>> vectors;    ///< one vector per vertex
};

/// Legacy ASCII VTK PolyData with per-vertex attributes. Throws InputError
/// if an attribute does not have one entry per vertex.
void write_vtk(const SurfaceMesh& mesh, const VtkAttributes& attributes, std::ostream& out);
void write_vtk(const SurfaceMesh& mesh, const VtkAttributes& attributes, const std::filesystem::path& path);

/// Region tag as a scalar: 0 upper sphere, 1 lower sphere, 2 tube, 3 junction.
std::vector<double> region_tag_scalars(const SurfaceMesh& mesh);

/// Snapshot of a map: image points as vectors, distance_to_forbidden of each
/// image and the region tag as scalars.
VtkAttributes field_attributes(const MapField& field, const PropellerRegion& region);

/// Flow log, one row per record: step,t,energy,max_tension,equivariance_error,min_margin.
void write_flow_log(const std::vector<StepRecord>& history, std::ostream& out);
void write_flow_log(const std::vector<StepRecord>& history, const std::filesystem::path& path);

/// Resumable flow state: surface parameters, step, time, energies and the
/// full field.
struct Checkpoint {
  static constexpr int kVersion = 1;
  SurfaceParams params;
  int step = 0;
  double time = 0.0;
  double energy = 0.0;
  double reference_energy = 0.0;
  std::vector<Vec3> values;
};

Checkpoint make_checkpoint(const FlowState& state);
/// JSON with a {"format": "hmf-checkpoint", "version": 1} header.
void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path);
/// Throws InputError on a missing file, a wrong header or a newer version.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace hmf
