#ifndef SURFFV_SECOND_ORDER_HPP
#define SURFFV_SECOND_ORDER_HPP

#include "surffv/solver.hpp"

namespace surffv {

// Per-cell tangent-plane gradients from a least-squares fit of the three
// edge-neighbor means at their barycenters, projected into the cell plane.
// Exact for data whose cell means are affine in the plane coordinates.
struct CellGradientField {
  std::vector<Vec3> gradients;
  int rank_deficient_count = 0;  // cells that fell back to a zero gradient
};

CellGradientField reconstruct(const CellField& state, const TriMesh& mesh,
                              const FlatFrame& frame);

// Barth-Jespersen style scaling: shrinks each gradient so the reconstructed
// edge-midpoint values stay within the local min/max of cell and neighbor
// means. Off by default in the solver (smooth test data).
void limit_gradients(CellGradientField& grads, const CellField& state, const TriMesh& mesh,
                     const FlatFrame& frame);

// One Heun step of the flat scheme with linear reconstruction:
//   u*      = u^n + dt L(u^n)
//   u^{n+1} = (u^n + u* + dt L(u*)) / 2
// where L uses Lax-Friedrichs fluxes at reconstructed edge-midpoint traces.
// Stationary surfaces only.
CellField rk2_step(const CellField& state, const FlatStepContext& ctx, const FluxField& flux,
                   const IntervalRule& edge_rule, bool use_reconstruction = true,
                   bool use_limiter = false);

struct SecondOrderOptions {
  SolverOptions base;
  bool use_reconstruction = true;
  bool use_limiter = false;
};

// Full second-order evolution on a stationary surface.
RunResult run_second_order(const TriMesh& mesh, const FluxField& flux,
                           const std::function<double(const Vec3&)>& u0, double T,
                           const SecondOrderOptions& opts = {});

}  // namespace surffv

#endif
