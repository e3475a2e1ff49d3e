#ifndef SURFFV_VTK_HPP
#define SURFFV_VTK_HPP

#include <string>
#include <vector>

#include "surffv/mesh.hpp"
#include "surffv/types.hpp"

namespace surffv {

// Legacy ASCII VTK unstructured grid (triangle cell type 5). Byte output is
// deterministic for identical inputs.
void write_vtk_mesh(const TriMesh& mesh, const Positions& positions, const std::string& path);

// Same, with one scalar per cell as CELL_DATA "u". Throws on an empty or
// size-mismatched field.
void write_vtk_frame(const TriMesh& mesh, const Positions& positions,
                     const std::vector<double>& cell_values, const std::string& path);

}  // namespace surffv

#endif
