#ifndef SURFFV_MESH_HPP
#define SURFFV_MESH_HPP

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "surffv/types.hpp"

namespace surffv {

// Interior edge of a closed oriented triangulation. Vertices satisfy v0 < v1;
// `left` is the cell traversing the edge as v0 -> v1 in its boundary loop,
// `right` the cell traversing it as v1 -> v0.
struct Edge {
  int v0 = -1;
  int v1 = -1;
  int left = -1;
  int right = -1;
};

// Triangulated closed surface with immutable topology. Vertex positions here
// are the reference configuration (time zero); moving surfaces supply
// per-time positions separately, indexed identically.
class TriMesh {
 public:
  TriMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles,
          int level = 0);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  // Edge indices bounding each cell, aligned so edge i sits opposite no
  // particular vertex (order follows discovery, not the vertex loop).
  const std::vector<std::array<int, 3>>& cell_edges() const { return cell_edges_; }
  int level() const { return level_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  // Cell across edge e from cell k.
  int neighbor(int cell, int edge_index) const {
    const Edge& e = edges_[edge_index];
    return e.left == cell ? e.right : e.left;
  }

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> cell_edges_;
  int level_ = 0;
};

// Mesh regularity data: h is the longest edge (equals the largest cell
// diameter for triangles) and alpha the largest constant satisfying
// alpha*h_K^2 <= |K| and alpha*|dK| <= h_K over all cells.
struct MeshQuality {
  double alpha = 0.0;
  double h = 0.0;
  std::vector<double> per_cell_diameters;
};

// Optional vertex projection applied after refinement (e.g. radial for the
// sphere) so that new vertices land on the exact surface.
using VertexProjection = std::function<Vec3(const Vec3&)>;

// Icosahedron subdivided `level` times with all vertices on the unit sphere.
// 20 * 4^level triangles; consistent outward orientation.
TriMesh build_icosphere(int level);

// Splits every triangle into four via edge midpoints; projects new vertices
// if a projection is given. Topology invariants are re-established.
TriMesh refine(const TriMesh& mesh, const VertexProjection& project = nullptr);

// Structured triangulation of the torus (sqrt(x1^2+x2^2)-major)^2 + x3^2 =
// minor^2 with resolution.first x resolution.second quads, two triangles each.
TriMesh build_torus(double major_radius, double minor_radius,
                    std::pair<int, int> resolution);

// Radial projection onto the sphere of given radius about the origin.
VertexProjection sphere_projection(double radius = 1.0);

// Quality of the mesh at the given vertex positions. Throws GeometryError
// naming the cell if a degenerate triangle is found.
MeshQuality mesh_quality(const TriMesh& mesh, const Positions& positions);

}  // namespace surffv

#endif
