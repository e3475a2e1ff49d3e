#ifndef SURFFV_TYPES_HPP
#define SURFFV_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace surffv {

using Vec3 = Eigen::Vector3d;

// Vertex coordinates of a mesh at one instant; index-aligned with TriMesh.
using Positions = std::vector<Vec3>;

// Requested size exceeds a hard resource bound.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid argument values (radii, levels, ranges).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Degenerate geometric configuration (zero-area cell, antipodal points, ...).
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An adaptive procedure failed to reach its tolerance within its depth bound.
struct ToleranceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A solver state became non-finite.
struct BlowUpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A flux lacks the representation required by the exact integration path.
struct UnsupportedFluxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace surffv

#endif
