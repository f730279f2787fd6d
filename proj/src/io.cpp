#include "hmf/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "hmf/errors.hpp"

namespace hmf {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  return out;
}

}  // namespace

void write_obj(const SurfaceMesh& mesh, std::ostream& out) {
  const auto old = out.precision(17);
  out << "# genus " << mesh.params.genus() << " surface, " << mesh.vertex_count() << " vertices\n";
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  out.precision(old);
}

void write_obj(const SurfaceMesh& mesh, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_obj(mesh, out);
}

SurfaceMesh read_obj(std::istream& in) {
  SurfaceMesh mesh;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw InputError("read_obj: bad vertex on line " + std::to_string(lineno));
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::array<int, 3> f{};
      for (int& idx : f) {
        std::string tok;
        if (!(ls >> tok)) throw InputError("read_obj: face with fewer than 3 vertices on line " + std::to_string(lineno));
        // Keep the vertex index of v/vt/vn triples.
        idx = std::stoi(tok.substr(0, tok.find('/'))) - 1;
        if (idx < 0 || idx >= mesh.vertex_count()) {
          throw InputError("read_obj: face index out of range on line " + std::to_string(lineno));
        }
      }
      mesh.faces.push_back(f);
    }
  }
  return mesh;
}

void write_vtk(const SurfaceMesh& mesh, const VtkAttributes& attributes, std::ostream& out) {
  const auto n = static_cast<std::size_t>(mesh.vertex_count());
  for (const auto& [name, s] : attributes.scalars) {
    if (s.size() != n) throw InputError("write_vtk: scalar '" + name + "' has the wrong length");
  }
  for (const auto& [name, v] : attributes.vectors) {
    if (v.size() != n) throw InputError("write_vtk: vector '" + name + "' has the wrong length");
  }
  const auto old = out.precision(17);
  out << "# vtk DataFile Version 3.0\nhmf surface\nASCII\nDATASET POLYDATA\n";
  out << "POINTS " << n << " double\n";
  for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  out << "POLYGONS " << mesh.face_count() << ' ' << 4 * mesh.face_count() << '\n';
  for (const auto& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  if (!attributes.scalars.empty() || !attributes.vectors.empty()) out << "POINT_DATA " << n << '\n';
  for (const auto& [name, s] : attributes.scalars) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double x : s) out << x << '\n';
  }
  for (const auto& [name, vs] : attributes.vectors) {
    out << "VECTORS " << name << " double\n";
    for (const auto& v : vs) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  out.precision(old);
}

void write_vtk(const SurfaceMesh& mesh, const VtkAttributes& attributes, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_vtk(mesh, attributes, out);
}

std::vector<double> region_tag_scalars(const SurfaceMesh& mesh) {
  std::vector<double> s;
  s.reserve(mesh.tags.size());
  for (const auto& t : mesh.tags) s.push_back(static_cast<double>(t.kind));
  if (s.empty()) s.assign(mesh.vertex_count(), 0.0);
  return s;
}

VtkAttributes field_attributes(const MapField& field, const PropellerRegion& region) {
  VtkAttributes a;
  auto& img = a.vectors["image"];
  auto& dist = a.scalars["distance_to_forbidden"];
  for (const auto& q : field.values()) {
    img.push_back(q.vec());
    dist.push_back(region.distance_to_forbidden(q));
  }
  a.scalars["region_tag"] = region_tag_scalars(field.mesh());
  return a;
}

void write_flow_log(const std::vector<StepRecord>& history, std::ostream& out) {
  const auto old = out.precision(17);
  out << "step,t,energy,max_tension,equivariance_error,min_margin\n";
  for (const auto& r : history) {
    out << r.step << ',' << r.t << ',' << r.energy << ',' << r.max_tension << ',' << r.equivariance_error << ','
        << r.min_margin << '\n';
  }
  out.precision(old);
}

void write_flow_log(const std::vector<StepRecord>& history, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_flow_log(history, out);
}

Checkpoint make_checkpoint(const FlowState& state) {
  Checkpoint cp;
  cp.params = state.field.mesh().params;
  cp.step = state.step;
  cp.time = state.time;
  cp.energy = state.energy;
  cp.reference_energy = state.reference_energy;
  for (const auto& q : state.field.values()) cp.values.push_back(q.vec());
  return cp;
}

void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path) {
  nlohmann::json j;
  j["format"] = "hmf-checkpoint";
  j["version"] = Checkpoint::kVersion;
  const SurfaceParams& p = cp.params;
  j["surface"] = {{"tube_radius", p.tube_radius}, {"tube_half_height", p.tube_half_height},
                  {"sphere_gap", p.sphere_gap},   {"epsilon", p.epsilon},
                  {"genus_parameter", p.genus_parameter}, {"resolution", p.resolution}};
  j["step"] = cp.step;
  j["time"] = cp.time;
  j["energy"] = cp.energy;
  j["reference_energy"] = cp.reference_energy;
  auto& vals = j["values"] = nlohmann::json::array();
  for (const auto& v : cp.values) vals.push_back({v.x(), v.y(), v.z()});
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out << j.dump() << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open checkpoint " + path.string());
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("format", "") != "hmf-checkpoint") throw InputError("not an hmf checkpoint: " + path.string());
    const int version = j.at("version").get<int>();
    if (version > Checkpoint::kVersion) {
      throw InputError("checkpoint version " + std::to_string(version) + " is newer than supported");
    }
    Checkpoint cp;
    const auto& s = j.at("surface");
    cp.params.tube_radius = s.at("tube_radius").get<double>();
    cp.params.tube_half_height = s.at("tube_half_height").get<double>();
    cp.params.sphere_gap = s.at("sphere_gap").get<double>();
    cp.params.epsilon = s.at("epsilon").get<double>();
    cp.params.genus_parameter = s.at("genus_parameter").get<int>();
    cp.params.resolution = s.at("resolution").get<int>();
    cp.step = j.at("step").get<int>();
    cp.time = j.at("time").get<double>();
    cp.energy = j.at("energy").get<double>();
    cp.reference_energy = j.at("reference_energy").get<double>();
    for (const auto& v : j.at("values")) cp.values.emplace_back(v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>());
    return cp;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed checkpoint " + path.string() + ": " + e.what());
  }
}

}  // namespace hmf
