#ifndef SURFFV_TESTPROBLEMS_HPP
#define SURFFV_TESTPROBLEMS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "surffv/solver.hpp"
#include "surffv/table.hpp"
#include "surffv/types.hpp"

namespace surffv {

// Configuration of one test-problem run. Unset fields take per-problem
// defaults (T = 1 on the unit sphere, T = 4 for the deforming torus; levels
// 0..4 for the sphere problems; lambda = 0 for problems 1 and 5, pi for 2-4,
// and half the flux derivative bound otherwise).
struct RunConfig {
  int tp = 1;
  std::optional<std::pair<int, int>> levels;
  std::optional<double> lambda;
  std::optional<double> T;
  double cfl_factor = 0.9;
  int p1 = 2;  // cell quadrature order (1 or 2 or 4)
  int p2 = 3;  // edge quadrature order (1, 3 or 5)
  int p3 = 1;  // time quadrature order (1, 3 or 5)
  std::string out_dir;  // empty: no artifacts
  int vtk_every = 0;    // extra VTK frames every n steps (0: first/last only)
  bool second_order = false;  // force the second-order flat scheme (TP 5/6 imply it)
  std::optional<double> init_tol;
};

struct TestProblemResult {
  ConvergenceTable table;  // empty for the torus problem
  double max_mass_drift = 0.0;
  double solution_range = 0.0;          // max - min of the final field (finest run)
  bool curved_field_exact_zero = true;  // problem 1 self-consistency
  std::vector<std::string> artifacts;
  bool pass = false;
  std::string criterion;
};

// Initial bump of the validation problem: 0.1 * exp(-2(1+r^2)/(1-r^2)^2)
// inside r < 1 with r = |x - (1,0,0)| / 0.74.
double tp6_initial(const Vec3& x);

// Solution transported by the flow of V: rotation about the x3-axis with
// period one. At integer times it coincides with the initial data.
double tp6_exact_solution(const Vec3& x, double t);

// Indicator initial data of problems 2-4.
double indicator_initial(const Vec3& x);

// Runs one of the seven test problems, evaluates its built-in criterion and
// writes artifacts if an output directory is configured.
TestProblemResult run_test_problem(const RunConfig& config);

// Maps the quadrature order knobs to concrete rules.
IntervalRule interval_rule_for_order(int order);
TriangleRule triangle_rule_for_order(int order);

}  // namespace surffv

#endif
