#include "surffv/quadrature.hpp"

#include <cmath>

namespace surffv {

IntervalRule IntervalRule::midpoint() { return {{0.5}, {1.0}, 1}; }

IntervalRule IntervalRule::gauss2() {
  const double d = 0.5 / std::sqrt(3.0);
  return {{0.5 - d, 0.5 + d}, {0.5, 0.5}, 3};
}

IntervalRule IntervalRule::gauss3() {
  const double d = 0.5 * std::sqrt(0.6);
  return {{0.5 - d, 0.5, 0.5 + d}, {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}, 5};
}

TriangleRule TriangleRule::centroid() {
  return {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}}, {1.0}, 1};
}

TriangleRule TriangleRule::edge_midpoints() {
  return {{{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}},
          {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
          2};
}

TriangleRule TriangleRule::dunavant4() {
  // Six-point rule, exact through degree 4.
  const double a1 = 0.108103018168070, b1 = 0.445948490915965;
  const double a2 = 0.816847572980459, b2 = 0.091576213509771;
  const double w1 = 0.223381589678011, w2 = 0.109951743655322;
  return {{{a1, b1, b1},
           {b1, a1, b1},
           {b1, b1, a1},
           {a2, b2, b2},
           {b2, a2, b2},
           {b2, b2, a2}},
          {w1, w1, w1, w2, w2, w2},
          4};
}

}  // namespace surffv
