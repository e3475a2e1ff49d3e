#ifndef SURFFV_GEOMETRY_HPP
#define SURFFV_GEOMETRY_HPP

#include <vector>

#include "surffv/mesh.hpp"
#include "surffv/types.hpp"

namespace surffv {

// Area of the flat triangle (p0,p1,p2): 0.5 * ||(p1-p0) x (p2-p0)||.
template <typename D0, typename D1, typename D2>
typename D0::Scalar triangle_area(const Eigen::MatrixBase<D0>& p0,
                                  const Eigen::MatrixBase<D1>& p1,
                                  const Eigen::MatrixBase<D2>& p2) {
  return typename D0::Scalar(0.5) * (p1 - p0).cross(p2 - p0).norm();
}

// Unit normal of (p0,p1,p2) in stored vertex order (cross product of the two
// edge vectors). Throws GeometryError for degenerate triangles.
template <typename D0, typename D1, typename D2>
Eigen::Matrix<typename D0::Scalar, 3, 1> triangle_normal(
    const Eigen::MatrixBase<D0>& p0, const Eigen::MatrixBase<D1>& p1,
    const Eigen::MatrixBase<D2>& p2) {
  Eigen::Matrix<typename D0::Scalar, 3, 1> n = (p1 - p0).cross(p2 - p0);
  const auto len = n.norm();
  if (!(len > 0)) throw GeometryError("zero-area triangle has no normal");
  return n / len;
}

// Conservative conormal of an edge shared by two cells: the mean of the two
// cross products nu x t with the tangent t oriented outward from the left
// cell (sign fixed by the barycenter test, not by vertex-order convention).
// The right cell's conormal is exactly the negation. The mean of two unit
// vectors is not renormalized.
Vec3 averaged_edge_conormal(const Vec3& edge_a, const Vec3& edge_b,
                            const Vec3& normal_left, const Vec3& barycenter_left,
                            const Vec3& normal_right);

// Flat per-cell quantities at one instant.
struct FlatCellGeom {
  double area = 0.0;
  Vec3 normal = Vec3::Zero();
  Vec3 barycenter = Vec3::Zero();
  double diameter = 0.0;
};

// Flat per-edge quantities at one instant. `conormal` belongs to the left
// cell; use its negation for the right cell.
struct FlatEdgeGeom {
  double length = 0.0;
  Vec3 midpoint = Vec3::Zero();
  Vec3 conormal = Vec3::Zero();
};

// All computable geometry of the polyhedral surface at one instant.
struct FlatFrame {
  std::vector<FlatCellGeom> cells;
  std::vector<FlatEdgeGeom> edges;
  double h = 0.0;  // longest edge
};

FlatCellGeom flat_cell_geometry(const TriMesh& mesh, int cell, const Positions& positions);
FlatEdgeGeom flat_edge_geometry(const TriMesh& mesh, int edge, const Positions& positions);
FlatFrame flat_frame(const TriMesh& mesh, const Positions& positions);

// Smallest value over all cells of <cell normal, reference normal at the
// projected barycenter>. Positive means consistent outward orientation.
double min_normal_alignment(const TriMesh& mesh, const Positions& positions,
                            const std::function<Vec3(const Vec3&)>& surface_normal);

}  // namespace surffv

#endif
