#ifndef SURFFV_SOLVER_HPP
#define SURFFV_SOLVER_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "surffv/flux.hpp"
#include "surffv/geometry.hpp"
#include "surffv/mesh.hpp"
#include "surffv/motion.hpp"
#include "surffv/quadrature.hpp"
#include "surffv/sphere.hpp"
#include "surffv/types.hpp"

namespace surffv {

// Piecewise-constant surface field: one value per cell at one instant.
struct CellField {
  std::vector<double> values;
  double time = 0.0;
  const TriMesh* mesh = nullptr;
};

enum class SchemeKind { flat, curved };

struct StepLogRow {
  int step = 0;
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double min = 0.0;
  double max = 0.0;
};
using StepLog = std::vector<StepLogRow>;

struct SolverOptions {
  IntervalRule time_rule = IntervalRule::midpoint();      // order p3 = 1
  IntervalRule edge_rule = IntervalRule::gauss2();        // order p2 = 3
  TriangleRule cell_rule = TriangleRule::edge_midpoints();  // order p1 = 2
  double cfl_factor = 0.9;
  // Initial cell means: adaptive subdivision (handles discontinuous data)
  // with this tolerance, or fixed-order quadrature for the flat scheme.
  bool adaptive_init = true;
  double init_tol = 1e-3;
  std::optional<SphereSurface> sphere;  // required by the curved scheme
  bool allow_quadrature_flux_fallback = false;
  // Invoked after every accepted step.
  std::function<void(int step, const CellField&, const Positions&)> step_callback;
};

// CFL bound dt = cfl_factor * alpha^2 h / (8 L) with L the Lipschitz
// constant lambda + du_bound/2 of the Lax-Friedrichs flux. Pure geometry
// evolution (L = 0) falls back to horizon/16.
double cfl_dt(const MeshQuality& quality, const FluxField& flux, double cfl_factor,
              double horizon);

// Flat geometry of one interval: areas at both endpoints, edge lengths at
// t0, and full frames at the time-quadrature nodes.
struct FlatStepContext {
  const TriMesh* mesh = nullptr;
  double t0 = 0.0, t1 = 0.0, dt = 0.0;
  std::vector<double> areas_now, areas_next, edge_len_now;
  std::vector<double> node_times, node_weights;
  std::vector<std::shared_ptr<const FlatFrame>> node_frames;
  std::vector<std::shared_ptr<const Positions>> node_positions;
};

FlatStepContext flat_step_context(const TriMesh& mesh, const SurfaceMotion& motion,
                                  double t0, double t1, const IntervalRule& time_rule);

// Same for the exact curved quantities on a sphere oracle.
struct CurvedStepContext {
  const TriMesh* mesh = nullptr;
  double t0 = 0.0, t1 = 0.0, dt = 0.0;
  std::vector<double> areas_now, areas_next, edge_len_now;
  std::vector<double> node_times, node_weights;
  std::vector<std::shared_ptr<const CurvedFrame>> node_frames;
  std::vector<std::shared_ptr<const Positions>> node_positions;
  // True when |e(t_q)|/|e(t0)| is the same for every edge (static meshes and
  // radial scaling): then the exact edge integrals of u-independent stream
  // terms telescope to zero around every cell boundary.
  bool uniform_edge_scaling = false;
};

CurvedStepContext curved_step_context(const TriMesh& mesh, const SurfaceMotion& motion,
                                      const SphereSurface& sphere, double t0, double t1,
                                      const IntervalRule& time_rule);

// Lax-Friedrichs flux mean across one edge (left-to-right orientation):
// time-quadrature of edge-quadrature means of <f(u)+f(v), mu>/2 plus
// lambda (u - v). Exactly antisymmetric under (u,v,mu) -> (v,u,-mu).
double lf_flux_flat(double u, double v, const FlatStepContext& ctx, int edge,
                    const FluxField& flux, const IntervalRule& edge_rule);

// Curved counterpart with exact edge means: stream-function endpoint
// evaluation per term, or dense arc quadrature when allowed.
double lf_flux_curved(double u, double v, const CurvedStepContext& ctx, int edge,
                      const FluxField& flux, bool allow_quadrature_fallback = false);

// Per-cell increment -(dt / |K(t1)|) * sum_e |e(t0)| F_e assembled edge by
// edge from one-sided trace values, so each interior flux is computed once
// and enters its two cells with opposite signs.
std::vector<double> flat_cell_increment(const std::vector<double>& left_trace,
                                        const std::vector<double>& right_trace,
                                        const FlatStepContext& ctx, const FluxField& flux,
                                        const IntervalRule& edge_rule);

// One forward step of the flat scheme.
CellField step_flat(const CellField& state, const FlatStepContext& ctx,
                    const FluxField& flux, const IntervalRule& edge_rule);

// One forward step of the curved scheme.
CellField step_curved(const CellField& state, const CurvedStepContext& ctx,
                      const FluxField& flux, bool allow_quadrature_fallback = false);

// Initial cell means by fixed-order quadrature on flat cells.
CellField init_flat(const TriMesh& mesh, const Positions& positions,
                    const std::function<double(const Vec3&)>& u0, const TriangleRule& rule);

// Initial cell means by adaptive subdivision on flat cells.
CellField init_flat_adaptive(const TriMesh& mesh, const Positions& positions,
                             const std::function<double(const Vec3&)>& u0, double tol);

// Initial cell means over the exact spherical cells.
CellField init_curved(const TriMesh& mesh, const Positions& positions,
                      const std::function<double(const Vec3&)>& u0,
                      const SphereSurface& sphere, double tol);

// Area-weighted L1 distance between two cell fields.
double l1_diff(const CellField& a, const CellField& b, const std::vector<double>& weights);

double total_mass(const CellField& state, const std::vector<double>& areas);

// Largest |mass(t) - mass(0)| over the log, relative to the initial scale.
double max_relative_mass_drift(const StepLog& log, double scale);

struct RunResult {
  CellField field;
  StepLog log;
};

// Full evolution from t=0 to t=T under CFL time stepping; the final step is
// shortened to land exactly on T. For moving surfaces dt is recomputed from
// the current geometry each step and additionally capped so that no cell
// area changes by more than 5% per step.
RunResult run(SchemeKind scheme, const TriMesh& mesh, const SurfaceMotion& motion,
              const FluxField& flux, const std::function<double(const Vec3&)>& u0,
              double T, const SolverOptions& opts = {});

void write_step_log_csv(const StepLog& log, const std::string& path);

}  // namespace surffv

#endif
