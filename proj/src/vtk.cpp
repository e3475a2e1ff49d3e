#include "surffv/vtk.hpp"

#include <cstdio>
#include <fstream>

namespace surffv {

namespace {

void write_header_and_grid(std::ofstream& out, const TriMesh& mesh,
                           const Positions& positions) {
  out << "# vtk DataFile Version 3.0\n";
  out << "surffv surface\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << positions.size() << " double\n";
  char buf[128];
  for (const Vec3& p : positions) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
  out << "CELLS " << mesh.num_cells() << " " << mesh.num_cells() * 4 << "\n";
  for (const auto& t : mesh.triangles()) {
    out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  }
  out << "CELL_TYPES " << mesh.num_cells() << "\n";
  for (int c = 0; c < mesh.num_cells(); ++c) out << "5\n";
}

}  // namespace

void write_vtk_mesh(const TriMesh& mesh, const Positions& positions, const std::string& path) {
  if (positions.size() != mesh.vertices().size()) {
    throw ParameterError("positions do not match mesh vertex count");
  }
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open " + path);
  write_header_and_grid(out, mesh, positions);
}

void write_vtk_frame(const TriMesh& mesh, const Positions& positions,
                     const std::vector<double>& cell_values, const std::string& path) {
  if (cell_values.empty()) throw ParameterError("refusing to write an empty cell field");
  if (static_cast<int>(cell_values.size()) != mesh.num_cells()) {
    throw ParameterError("cell field does not match mesh cell count");
  }
  if (positions.size() != mesh.vertices().size()) {
    throw ParameterError("positions do not match mesh vertex count");
  }
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open " + path);
  write_header_and_grid(out, mesh, positions);
  out << "CELL_DATA " << mesh.num_cells() << "\n";
  out << "SCALARS u double 1\n";
  out << "LOOKUP_TABLE default\n";
  char buf[64];
  for (double v : cell_values) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    out << buf;
  }
}

}  // namespace surffv
