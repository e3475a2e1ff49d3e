#include "surffv/second_order.hpp"

#include <algorithm>
#include <cmath>

namespace surffv {

namespace {

void require_stationary(const FlatStepContext& ctx) {
  if (ctx.areas_now != ctx.areas_next) {
    throw ParameterError("the second-order scheme supports stationary surfaces only");
  }
}

// Edge-midpoint traces from cell means plus in-plane gradients.
void midpoint_traces(const CellField& state, const CellGradientField& grads,
                     const TriMesh& mesh, const FlatFrame& frame, std::vector<double>& uL,
                     std::vector<double>& uR) {
  uL.resize(mesh.num_edges());
  uR.resize(mesh.num_edges());
  for (int i = 0; i < mesh.num_edges(); ++i) {
    const Edge& e = mesh.edges()[i];
    const Vec3& m = frame.edges[i].midpoint;
    uL[i] = state.values[e.left] +
            grads.gradients[e.left].dot(m - frame.cells[e.left].barycenter);
    uR[i] = state.values[e.right] +
            grads.gradients[e.right].dot(m - frame.cells[e.right].barycenter);
  }
}

std::vector<double> stage_increment(const CellField& state, const FlatStepContext& ctx,
                                    const FluxField& flux, const IntervalRule& edge_rule,
                                    bool use_reconstruction, bool use_limiter) {
  const TriMesh& mesh = *ctx.mesh;
  const FlatFrame& frame = *ctx.node_frames.front();
  std::vector<double> uL, uR;
  if (use_reconstruction) {
    CellGradientField grads = reconstruct(state, mesh, frame);
    if (use_limiter) limit_gradients(grads, state, mesh, frame);
    midpoint_traces(state, grads, mesh, frame, uL, uR);
  } else {
    uL.resize(mesh.num_edges());
    uR.resize(mesh.num_edges());
    for (int i = 0; i < mesh.num_edges(); ++i) {
      const Edge& e = mesh.edges()[i];
      uL[i] = state.values[e.left];
      uR[i] = state.values[e.right];
    }
  }
  return flat_cell_increment(uL, uR, ctx, flux, edge_rule);
}

}  // namespace

CellGradientField reconstruct(const CellField& state, const TriMesh& mesh,
                              const FlatFrame& frame) {
  CellGradientField out;
  out.gradients.assign(mesh.num_cells(), Vec3::Zero());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const FlatCellGeom& g = frame.cells[c];
    // In-plane orthonormal basis from the cell normal.
    Vec3 b1 = g.normal.cross(Vec3::UnitX());
    if (b1.squaredNorm() < 0.25) b1 = g.normal.cross(Vec3::UnitY());
    b1.normalize();
    const Vec3 b2 = g.normal.cross(b1);

    double a00 = 0.0, a01 = 0.0, a11 = 0.0, r0 = 0.0, r1 = 0.0;
    for (int k = 0; k < 3; ++k) {
      const int n = mesh.neighbor(c, mesh.cell_edges()[c][k]);
      const Vec3 d = frame.cells[n].barycenter - g.barycenter;
      const double xi = d.dot(b1);
      const double eta = d.dot(b2);
      const double delta = state.values[n] - state.values[c];
      a00 += xi * xi;
      a01 += xi * eta;
      a11 += eta * eta;
      r0 += xi * delta;
      r1 += eta * delta;
    }
    const double det = a00 * a11 - a01 * a01;
    if (!(det > 1e-12 * std::max(a00, a11) * std::max(a00, a11))) {
      ++out.rank_deficient_count;  // keep the zero gradient
      continue;
    }
    const double g1 = (a11 * r0 - a01 * r1) / det;
    const double g2 = (a00 * r1 - a01 * r0) / det;
    out.gradients[c] = g1 * b1 + g2 * b2;
  }
  return out;
}

void limit_gradients(CellGradientField& grads, const CellField& state, const TriMesh& mesh,
                     const FlatFrame& frame) {
  for (int c = 0; c < mesh.num_cells(); ++c) {
    double lo = state.values[c];
    double hi = state.values[c];
    for (int k = 0; k < 3; ++k) {
      const double un = state.values[mesh.neighbor(c, mesh.cell_edges()[c][k])];
      lo = std::min(lo, un);
      hi = std::max(hi, un);
    }
    double theta = 1.0;
    for (int k = 0; k < 3; ++k) {
      const int e = mesh.cell_edges()[c][k];
      const double trace = state.values[c] + grads.gradients[c].dot(
                               frame.edges[e].midpoint - frame.cells[c].barycenter);
      const double excess = trace - state.values[c];
      if (trace > hi && excess > 0.0) theta = std::min(theta, (hi - state.values[c]) / excess);
      if (trace < lo && excess < 0.0) theta = std::min(theta, (lo - state.values[c]) / excess);
    }
    grads.gradients[c] *= std::clamp(theta, 0.0, 1.0);
  }
}

CellField rk2_step(const CellField& state, const FlatStepContext& ctx, const FluxField& flux,
                   const IntervalRule& edge_rule, bool use_reconstruction, bool use_limiter) {
  require_stationary(ctx);
  const std::vector<double> inc1 =
      stage_increment(state, ctx, flux, edge_rule, use_reconstruction, use_limiter);

  CellField stage;
  stage.mesh = state.mesh;
  stage.time = ctx.t1;
  stage.values.resize(state.values.size());
  for (std::size_t c = 0; c < state.values.size(); ++c) {
    stage.values[c] = state.values[c] + inc1[c];
  }

  const std::vector<double> inc2 =
      stage_increment(stage, ctx, flux, edge_rule, use_reconstruction, use_limiter);

  CellField next;
  next.mesh = state.mesh;
  next.time = ctx.t1;
  next.values.resize(state.values.size());
  for (std::size_t c = 0; c < state.values.size(); ++c) {
    next.values[c] = 0.5 * (state.values[c] + stage.values[c] + inc2[c]);
    if (!std::isfinite(next.values[c])) {
      throw BlowUpError("non-finite value in cell " + std::to_string(c));
    }
  }
  return next;
}

RunResult run_second_order(const TriMesh& mesh, const FluxField& flux,
                           const std::function<double(const Vec3&)>& u0, double T,
                           const SecondOrderOptions& opts) {
  const SurfaceMotion motion = SurfaceMotion::identity(std::max(T, 1.0));
  const Positions pos0 = positions_at(mesh, motion, 0.0);
  const SolverOptions& base = opts.base;

  CellField state = base.adaptive_init ? init_flat_adaptive(mesh, pos0, u0, base.init_tol)
                                       : init_flat(mesh, pos0, u0, base.cell_rule);

  const auto frame = std::make_shared<const FlatFrame>(flat_frame(mesh, pos0));
  std::vector<double> areas(frame->cells.size());
  for (std::size_t c = 0; c < areas.size(); ++c) areas[c] = frame->cells[c].area;

  auto log_row = [&](int step, double t, double dt, const CellField& field) {
    StepLogRow row;
    row.step = step;
    row.t = t;
    row.dt = dt;
    row.mass = total_mass(field, areas);
    const auto [mn, mx] = std::minmax_element(field.values.begin(), field.values.end());
    row.min = *mn;
    row.max = *mx;
    return row;
  };

  RunResult result;
  result.log.push_back(log_row(0, 0.0, 0.0, state));
  if (T == 0.0) {
    result.field = std::move(state);
    return result;
  }

  const MeshQuality quality = mesh_quality(mesh, pos0);
  const auto pos_shared = std::make_shared<const Positions>(pos0);
  double t = 0.0;
  int step = 0;
  while (t < T) {
    ++step;
    double dt = cfl_dt(quality, flux, base.cfl_factor, T);
    if (t + dt >= T || T - (t + dt) < 1e-12 * T) dt = T - t;
    const double t1 = t + dt;

    FlatStepContext ctx;
    ctx.mesh = &mesh;
    ctx.t0 = t;
    ctx.t1 = t1;
    ctx.dt = dt;
    ctx.areas_now = areas;
    ctx.areas_next = areas;
    ctx.edge_len_now.resize(mesh.num_edges());
    for (int i = 0; i < mesh.num_edges(); ++i) ctx.edge_len_now[i] = frame->edges[i].length;
    for (std::size_t q = 0; q < base.time_rule.nodes.size(); ++q) {
      ctx.node_times.push_back(t + base.time_rule.nodes[q] * dt);
      ctx.node_weights.push_back(base.time_rule.weights[q]);
      ctx.node_frames.push_back(frame);
      ctx.node_positions.push_back(pos_shared);
    }

    state = rk2_step(state, ctx, flux, base.edge_rule, opts.use_reconstruction,
                     opts.use_limiter);
    t = t1;
    result.log.push_back(log_row(step, t, dt, state));
    if (base.step_callback) base.step_callback(step, state, pos0);
  }
  result.field = std::move(state);
  return result;
}

}  // namespace surffv
