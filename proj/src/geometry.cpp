#include "surffv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace surffv {

Vec3 averaged_edge_conormal(const Vec3& edge_a, const Vec3& edge_b,
                            const Vec3& normal_left, const Vec3& barycenter_left,
                            const Vec3& normal_right) {
  Vec3 tangent = edge_b - edge_a;
  const double len = tangent.norm();
  if (!(len > 0.0)) throw GeometryError("degenerate edge has no conormal");
  tangent /= len;
  const Vec3 midpoint = 0.5 * (edge_a + edge_b);
  if (normal_left.cross(tangent).dot(midpoint - barycenter_left) < 0.0) {
    tangent = -tangent;
  }
  return 0.5 * (normal_left + normal_right).cross(tangent);
}

FlatCellGeom flat_cell_geometry(const TriMesh& mesh, int cell, const Positions& positions) {
  const auto& t = mesh.triangles()[cell];
  const Vec3& p0 = positions[t[0]];
  const Vec3& p1 = positions[t[1]];
  const Vec3& p2 = positions[t[2]];
  FlatCellGeom g;
  g.area = triangle_area(p0, p1, p2);
  if (!(g.area > 0.0)) {
    throw GeometryError("degenerate cell " + std::to_string(cell));
  }
  g.normal = triangle_normal(p0, p1, p2);
  g.barycenter = (p0 + p1 + p2) / 3.0;
  g.diameter = std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
  return g;
}

FlatEdgeGeom flat_edge_geometry(const TriMesh& mesh, int edge, const Positions& positions) {
  const Edge& e = mesh.edges()[edge];
  const FlatCellGeom left = flat_cell_geometry(mesh, e.left, positions);
  const FlatCellGeom right = flat_cell_geometry(mesh, e.right, positions);
  const Vec3& a = positions[e.v0];
  const Vec3& b = positions[e.v1];
  FlatEdgeGeom g;
  g.length = (b - a).norm();
  g.midpoint = 0.5 * (a + b);
  g.conormal = averaged_edge_conormal(a, b, left.normal, left.barycenter, right.normal);
  return g;
}

FlatFrame flat_frame(const TriMesh& mesh, const Positions& positions) {
  FlatFrame frame;
  frame.cells.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    frame.cells[c] = flat_cell_geometry(mesh, c, positions);
  }
  frame.edges.resize(mesh.num_edges());
  for (int i = 0; i < mesh.num_edges(); ++i) {
    const Edge& e = mesh.edges()[i];
    const Vec3& a = positions[e.v0];
    const Vec3& b = positions[e.v1];
    FlatEdgeGeom& g = frame.edges[i];
    g.length = (b - a).norm();
    g.midpoint = 0.5 * (a + b);
    g.conormal = averaged_edge_conormal(a, b, frame.cells[e.left].normal,
                                        frame.cells[e.left].barycenter,
                                        frame.cells[e.right].normal);
    frame.h = std::max(frame.h, g.length);
  }
  return frame;
}

double min_normal_alignment(const TriMesh& mesh, const Positions& positions,
                            const std::function<Vec3(const Vec3&)>& surface_normal) {
  double worst = std::numeric_limits<double>::infinity();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const FlatCellGeom g = flat_cell_geometry(mesh, c, positions);
    worst = std::min(worst, g.normal.dot(surface_normal(g.barycenter)));
  }
  return worst;
}

}  // namespace surffv
