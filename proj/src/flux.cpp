#include "surffv/flux.hpp"

#include <cmath>

namespace surffv {

namespace {

const double kTwoPi = 2.0 * M_PI;

FluxTerm constant_term(std::function<Vec3(const Vec3&)> field, double bound,
                       std::optional<std::function<double(const Vec3&)>> stream) {
  FluxTerm t;
  t.coef = [](double) { return 1.0; };
  t.coef_derivative = [](double) { return 0.0; };
  t.field = std::move(field);
  t.field_bound = bound;
  t.stream = std::move(stream);
  t.u_independent = true;
  return t;
}

FluxTerm linear_term(std::function<Vec3(const Vec3&)> field, double bound,
                     std::optional<std::function<double(const Vec3&)>> stream) {
  FluxTerm t;
  t.coef = [](double u) { return u; };
  t.coef_derivative = [](double) { return 1.0; };
  t.field = std::move(field);
  t.field_bound = bound;
  t.stream = std::move(stream);
  return t;
}

FluxTerm burgers_term(std::function<Vec3(const Vec3&)> field, double bound,
                      std::optional<std::function<double(const Vec3&)>> stream) {
  FluxTerm t;
  t.coef = [](double u) { return 0.5 * u * u; };
  t.coef_derivative = [](double u) { return u; };
  t.field = std::move(field);
  t.field_bound = bound;
  t.stream = std::move(stream);
  return t;
}

double sup_du(const FluxField& f, double lo, double hi) {
  double bound = 0.0;
  for (const auto& term : f.terms) {
    const double dc = std::max(std::abs(term.coef_derivative(lo)),
                               std::abs(term.coef_derivative(hi)));
    bound += dc * term.field_bound;
  }
  return bound;
}

}  // namespace

Vec3 field_V(const Vec3& x) {
  const double len = x.norm();
  if (!(len > 0.0)) throw ParameterError("field V undefined at the origin");
  return (kTwoPi / len) * Vec3(x.y(), -x.x(), 0.0);
}

Vec3 field_W(const Vec3& x) {
  const double len = x.norm();
  if (!(len > 0.0)) throw ParameterError("field W undefined at the origin");
  return (kTwoPi / len) * Vec3(-x.z(), 0.0, x.x());
}

FluxField make_flux(FluxKind kind, double u_min, double u_max,
                    std::optional<double> lambda_override) {
  if (!(u_max >= u_min)) throw ParameterError("invalid state range");
  const auto stream_V = [](const Vec3& x) { return kTwoPi * x.z(); };
  const auto stream_W = [](const Vec3& x) { return kTwoPi * x.y(); };

  FluxField f;
  switch (kind) {
    case FluxKind::stationary_V:
      f.terms.push_back(constant_term(field_V, kTwoPi, stream_V));
      break;
    case FluxKind::linear_W:
      f.terms.push_back(linear_term(field_W, kTwoPi, stream_W));
      break;
    case FluxKind::burgers_V:
      f.terms.push_back(burgers_term(field_V, kTwoPi, stream_V));
      break;
    case FluxKind::two_dim:
      f.terms.push_back(linear_term(field_V, kTwoPi, stream_V));
      f.terms.push_back(burgers_term(field_W, kTwoPi, stream_W));
      break;
    case FluxKind::torus_burgers:
      // ||(x2,-x1,0)|| stays below 1.5 on the deforming torus with radii
      // (1, 0.4); no stream representation (flat scheme only).
      f.terms.push_back(burgers_term(
          [](const Vec3& x) { return Vec3(x.y(), -x.x(), 0.0); }, 1.5, std::nullopt));
      break;
    case FluxKind::linear_V:
      f.terms.push_back(linear_term(field_V, kTwoPi, stream_V));
      break;
  }

  const double delta = 0.1 * (u_max - u_min) + 1e-6;
  f.du_bound = sup_du(f, u_min - delta, u_max + delta);
  f.lambda = lambda_override ? *lambda_override : 0.5 * sup_du(f, u_min, u_max);
  return f;
}

}  // namespace surffv
