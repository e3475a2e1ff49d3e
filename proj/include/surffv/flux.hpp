#ifndef SURFFV_FLUX_HPP
#define SURFFV_FLUX_HPP

#include <functional>
#include <optional>
#include <vector>

#include "surffv/types.hpp"

namespace surffv {

// Rotation field around the x3-axis, tangential to every origin-centered
// sphere: V(x) = (2*pi/||x||) (x2, -x1, 0).
Vec3 field_V(const Vec3& x);

// Rotation field across the poles: W(x) = (2*pi/||x||) (-x3, 0, x1).
Vec3 field_W(const Vec3& x);

// One separable flux contribution coef(u) * field(x). When `stream` is set,
// field = nu x grad(stream) on origin-centered spheres, so edge integrals of
// <field, mu> reduce to endpoint differences of the stream function.
struct FluxTerm {
  std::function<double(double)> coef;
  std::function<double(double)> coef_derivative;
  std::function<Vec3(const Vec3&)> field;
  double field_bound = 0.0;  // sup of ||field|| over the working region
  std::optional<std::function<double(const Vec3&)>> stream;
  bool u_independent = false;
};

struct FluxField {
  std::vector<FluxTerm> terms;
  // sup ||d_u f|| over the inflated state box; enters the CFL constant.
  double du_bound = 0.0;
  // Lax-Friedrichs viscosity.
  double lambda = 0.0;

  Vec3 eval(double u, const Vec3& x, double t) const {
    (void)t;
    Vec3 f = Vec3::Zero();
    for (const auto& term : terms) f += term.coef(u) * term.field(x);
    return f;
  }

  bool has_streams() const {
    for (const auto& term : terms) {
      if (!term.stream) return false;
    }
    return !terms.empty();
  }
};

enum class FluxKind {
  stationary_V,   // f = V
  linear_W,       // f = u W
  burgers_V,      // f = u^2/2 V
  two_dim,        // f = u V + u^2/2 W
  torus_burgers,  // f = u^2/2 (x2, -x1, 0)
  linear_V,       // f = u V
};

// Builds a flux with analytic derivative bounds over [u_min, u_max]. The
// stored du_bound is taken over the box inflated by 10% plus a snap, so the
// CFL constant covers excursions; the default lambda is half the sup of
// ||d_u f|| over the exact range, matching the reference values (pi for the
// linear and Burgers problems on [0,1]).
FluxField make_flux(FluxKind kind, double u_min = 0.0, double u_max = 1.0,
                    std::optional<double> lambda_override = std::nullopt);

}  // namespace surffv

#endif
