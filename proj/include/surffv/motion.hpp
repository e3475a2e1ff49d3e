#ifndef SURFFV_MOTION_HPP
#define SURFFV_MOTION_HPP

#include <functional>

#include "surffv/mesh.hpp"
#include "surffv/types.hpp"

namespace surffv {

// Prescribed Lagrangian motion: maps a reference point (time zero) to its
// position at time t. The map at t=0 is the identity.
struct SurfaceMotion {
  std::function<Vec3(const Vec3&, double)> move;
  double time_horizon = 1.0;
  // Rough bound on vertex speed, used to seed the moving-mesh step cap.
  double max_speed = 0.0;
  // True if positions never change; lets solvers reuse geometry frames.
  bool is_static = true;

  static SurfaceMotion identity(double time_horizon = 1.0);

  // Radial scaling x -> (R(t)/R(0)) x; keeps sphere meshes on spheres.
  static SurfaceMotion scaled_sphere(std::function<double(double)> radius_fn,
                                     double time_horizon = 1.0);

  // Scaling composed with a tangential squeeze along x1, renormalized to the
  // sphere of radius R(t): a non-uniform sphere-preserving motion.
  static SurfaceMotion squeezed_sphere(std::function<double(double)> radius_fn,
                                       double squeeze_strength = 0.3,
                                       double time_horizon = 1.0);

  // Compression of the right torus half and stretching of the left along x1;
  // ramps up over [0,2] and freezes for t in [2,4].
  static SurfaceMotion torus_deformation(double time_horizon = 4.0);
};

// Deformation factor of the torus motion at time t applied to coordinate x1.
double torus_deformation_x1(double x1, double t);

// Applies the motion to every reference vertex. Throws for t outside
// [0, time_horizon].
Positions positions_at(const TriMesh& mesh, const SurfaceMotion& motion, double t);

}  // namespace surffv

#endif
