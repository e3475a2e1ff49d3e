#ifndef SURFFV_QUADRATURE_HPP
#define SURFFV_QUADRATURE_HPP

#include <array>
#include <vector>

#include "surffv/types.hpp"

namespace surffv {

// Quadrature on the reference interval [0,1]. Weights sum to one; `order` is
// the highest polynomial degree integrated exactly.
struct IntervalRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 1;

  static IntervalRule midpoint();  // order 1
  static IntervalRule gauss2();    // order 3
  static IntervalRule gauss3();    // order 5
};

// Quadrature on the reference triangle in barycentric coordinates.
struct TriangleRule {
  std::vector<std::array<double, 3>> nodes;
  std::vector<double> weights;
  int order = 1;

  static TriangleRule centroid();       // order 1
  static TriangleRule edge_midpoints(); // order 2
  static TriangleRule dunavant4();      // order 4, for oracle-grade integrals
};

// Integral of `f` along the segment [a,b]. Q returns the integral; divide by
// the segment length for the mean.
template <typename F>
double quad_edge(const IntervalRule& rule, const Vec3& a, const Vec3& b, F&& f) {
  const double len = (b - a).norm();
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(Vec3(a + rule.nodes[i] * (b - a)));
  }
  return acc * len;
}

// Integral of `f` over the flat triangle (p0,p1,p2).
template <typename F>
double quad_cell(const TriangleRule& rule, const Vec3& p0, const Vec3& p1,
                 const Vec3& p2, F&& f) {
  const double area = 0.5 * (p1 - p0).cross(p2 - p0).norm();
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const auto& l = rule.nodes[i];
    acc += rule.weights[i] * f(Vec3(l[0] * p0 + l[1] * p1 + l[2] * p2));
  }
  return acc * area;
}

// Integral of `f` over the time interval [t0,t1].
template <typename F>
double quad_time(const IntervalRule& rule, double t0, double t1, F&& f) {
  const double dt = t1 - t0;
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(t0 + rule.nodes[i] * dt);
  }
  return acc * dt;
}

}  // namespace surffv

#endif
