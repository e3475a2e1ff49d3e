#include "surffv/motion.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace surffv {

namespace {
constexpr double kTorusSqueeze = 0.4;

double ramp(double t) {
  // 0 at t=0, 1 at t=2, frozen afterwards.
  return 0.5 * (1.0 - std::cos(M_PI * std::min(t, 2.0) / 2.0));
}
}  // namespace

double torus_deformation_x1(double x1, double t) {
  return x1 * (1.0 - ramp(t) * std::tanh(3.0 * x1) * kTorusSqueeze);
}

SurfaceMotion SurfaceMotion::identity(double time_horizon) {
  SurfaceMotion m;
  m.move = [](const Vec3& x, double) { return x; };
  m.time_horizon = time_horizon;
  m.max_speed = 0.0;
  m.is_static = true;
  return m;
}

SurfaceMotion SurfaceMotion::scaled_sphere(std::function<double(double)> radius_fn,
                                           double time_horizon) {
  SurfaceMotion m;
  const double r0 = radius_fn(0.0);
  m.move = [radius_fn, r0](const Vec3& x, double t) {
    return Vec3((radius_fn(t) / r0) * x);
  };
  m.time_horizon = time_horizon;
  double max_speed = 0.0;
  const int samples = 64;
  for (int i = 0; i < samples; ++i) {
    const double t = time_horizon * i / samples;
    const double dt = time_horizon / 1024.0;
    max_speed = std::max(max_speed,
                         std::abs(radius_fn(std::min(t + dt, time_horizon)) - radius_fn(t)) / dt);
  }
  m.max_speed = max_speed / r0;
  m.is_static = false;
  return m;
}

SurfaceMotion SurfaceMotion::squeezed_sphere(std::function<double(double)> radius_fn,
                                             double squeeze_strength, double time_horizon) {
  SurfaceMotion m;
  const double r0 = radius_fn(0.0);
  m.move = [radius_fn, r0, squeeze_strength](const Vec3& x, double t) {
    Vec3 y = x / r0;
    y.x() *= 1.0 - (t / 1.0) * squeeze_strength * std::tanh(3.0 * y.x());
    return Vec3(radius_fn(t) * y.normalized());
  };
  m.time_horizon = time_horizon;
  m.max_speed = squeeze_strength + 1.0;
  m.is_static = false;
  return m;
}

SurfaceMotion SurfaceMotion::torus_deformation(double time_horizon) {
  SurfaceMotion m;
  m.move = [](const Vec3& x, double t) {
    return Vec3(torus_deformation_x1(x.x(), t), x.y(), x.z());
  };
  m.time_horizon = time_horizon;
  m.max_speed = kTorusSqueeze * M_PI / 2.0;
  m.is_static = false;
  return m;
}

Positions positions_at(const TriMesh& mesh, const SurfaceMotion& motion, double t) {
  if (t < 0.0 || t > motion.time_horizon * (1.0 + 1e-12) + 1e-14) {
    throw ParameterError("time " + std::to_string(t) + " outside the motion horizon");
  }
  Positions out(mesh.vertices().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = motion.move(mesh.vertices()[i], t);
  }
  return out;
}

}  // namespace surffv
