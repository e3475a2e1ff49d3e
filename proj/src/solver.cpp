#include "surffv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "surffv/parallel.hpp"

namespace surffv {

namespace {

constexpr double kAreaChangeCap = 0.05;  // per-step relative area change bound

std::vector<double> cell_areas(const FlatFrame& frame) {
  std::vector<double> areas(frame.cells.size());
  for (std::size_t i = 0; i < areas.size(); ++i) areas[i] = frame.cells[i].area;
  return areas;
}

// Exact mean of <field, mu> along the arc for one flux term.
double curved_term_mean(const FluxTerm& term, const Vec3& a, const Vec3& b,
                        const Vec3& mu, double R, bool allow_fallback) {
  if (term.stream) return exact_edge_flux_average(*term.stream, a, b, mu, R);
  if (!allow_fallback) {
    throw UnsupportedFluxError(
        "flux term has no stream representation and quadrature fallback is disabled");
  }
  return quadrature_edge_flux_average(term.field, a, b, mu, R);
}

double lf_flux_curved_impl(double u, double v, const CurvedStepContext& ctx, int edge,
                           const FluxField& flux, bool skip_u_independent_streams,
                           bool allow_fallback) {
  const Edge& e = ctx.mesh->edges()[edge];
  double central = 0.0;
  for (std::size_t q = 0; q < ctx.node_times.size(); ++q) {
    const Positions& pos = *ctx.node_positions[q];
    const CurvedFrame& frame = *ctx.node_frames[q];
    double node_value = 0.0;
    for (const auto& term : flux.terms) {
      if (skip_u_independent_streams && term.u_independent && term.stream) continue;
      const double mean = curved_term_mean(term, pos[e.v0], pos[e.v1],
                                           frame.edge_conormal[edge], frame.R, allow_fallback);
      node_value += 0.5 * (term.coef(u) + term.coef(v)) * mean;
    }
    central += ctx.node_weights[q] * node_value;
  }
  return central + flux.lambda * (u - v);
}

std::vector<double> curved_cell_increment(const std::vector<double>& left_trace,
                                          const std::vector<double>& right_trace,
                                          const CurvedStepContext& ctx, const FluxField& flux,
                                          bool allow_fallback) {
  const TriMesh& mesh = *ctx.mesh;
  const std::size_t ne = static_cast<std::size_t>(mesh.num_edges());
  std::vector<double> edge_flux(ne);
  // When every edge scales by the same factor over the interval, the exact
  // endpoint integrals of u-independent stream terms telescope to zero
  // around each closed cell boundary, so those terms are dropped from the
  // per-edge assembly; this keeps exact stationary states exactly stationary.
  parallel_for(ne, [&](std::size_t i) {
    edge_flux[i] = ctx.edge_len_now[i] *
                   lf_flux_curved_impl(left_trace[i], right_trace[i], ctx,
                                       static_cast<int>(i), flux,
                                       ctx.uniform_edge_scaling, allow_fallback);
  });
  std::vector<double> acc(mesh.num_cells(), 0.0);
  for (std::size_t i = 0; i < ne; ++i) {
    const Edge& e = mesh.edges()[i];
    acc[e.left] += edge_flux[i];
    acc[e.right] -= edge_flux[i];
  }
  std::vector<double> inc(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    inc[c] = -(ctx.dt / ctx.areas_next[c]) * acc[c];
  }
  return inc;
}

// Static-motion contexts differ across steps only in their times; reuse the
// geometry computed once per run.
FlatStepContext static_flat_ctx(const TriMesh& mesh,
                                const std::shared_ptr<const FlatFrame>& frame,
                                const std::shared_ptr<const Positions>& pos, double t0,
                                double t1, const IntervalRule& time_rule) {
  FlatStepContext ctx;
  ctx.mesh = &mesh;
  ctx.t0 = t0;
  ctx.t1 = t1;
  ctx.dt = t1 - t0;
  ctx.areas_now = cell_areas(*frame);
  ctx.areas_next = ctx.areas_now;
  ctx.edge_len_now.resize(mesh.num_edges());
  for (int i = 0; i < mesh.num_edges(); ++i) ctx.edge_len_now[i] = frame->edges[i].length;
  for (std::size_t q = 0; q < time_rule.nodes.size(); ++q) {
    ctx.node_times.push_back(t0 + time_rule.nodes[q] * ctx.dt);
    ctx.node_weights.push_back(time_rule.weights[q]);
    ctx.node_frames.push_back(frame);
    ctx.node_positions.push_back(pos);
  }
  return ctx;
}

CurvedStepContext static_curved_ctx(const TriMesh& mesh,
                                    const std::shared_ptr<const CurvedFrame>& frame,
                                    const std::shared_ptr<const Positions>& pos, double t0,
                                    double t1, const IntervalRule& time_rule) {
  CurvedStepContext ctx;
  ctx.mesh = &mesh;
  ctx.t0 = t0;
  ctx.t1 = t1;
  ctx.dt = t1 - t0;
  ctx.areas_now = frame->cell_area;
  ctx.areas_next = ctx.areas_now;
  ctx.edge_len_now = frame->edge_length;
  ctx.uniform_edge_scaling = true;
  for (std::size_t q = 0; q < time_rule.nodes.size(); ++q) {
    ctx.node_times.push_back(t0 + time_rule.nodes[q] * ctx.dt);
    ctx.node_weights.push_back(time_rule.weights[q]);
    ctx.node_frames.push_back(frame);
    ctx.node_positions.push_back(pos);
  }
  return ctx;
}

void check_finite(const std::vector<double>& values, double t) {
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (!std::isfinite(values[c])) {
      throw BlowUpError("non-finite value in cell " + std::to_string(c) + " at t=" +
                        std::to_string(t));
    }
  }
}

template <typename EdgeTrace>
void traces_from_cells(const TriMesh& mesh, const std::vector<double>& values,
                       EdgeTrace&& assign) {
  for (int i = 0; i < mesh.num_edges(); ++i) {
    const Edge& e = mesh.edges()[i];
    assign(i, values[e.left], values[e.right]);
  }
}

}  // namespace

double cfl_dt(const MeshQuality& quality, const FluxField& flux, double cfl_factor,
              double horizon) {
  if (!(quality.alpha > 0.0)) throw ParameterError("mesh quality alpha must be positive");
  if (!(cfl_factor > 0.0 && cfl_factor <= 1.0)) {
    throw ParameterError("cfl factor must lie in (0, 1]");
  }
  const double L = flux.lambda + 0.5 * flux.du_bound;
  if (!(L > 0.0)) return horizon / 16.0;
  return cfl_factor * quality.alpha * quality.alpha * quality.h / (8.0 * L);
}

FlatStepContext flat_step_context(const TriMesh& mesh, const SurfaceMotion& motion,
                                  double t0, double t1, const IntervalRule& time_rule) {
  FlatStepContext ctx;
  ctx.mesh = &mesh;
  ctx.t0 = t0;
  ctx.t1 = t1;
  ctx.dt = t1 - t0;
  const auto pos0 = std::make_shared<Positions>(positions_at(mesh, motion, t0));
  const auto frame0 = std::make_shared<FlatFrame>(flat_frame(mesh, *pos0));
  ctx.areas_now = cell_areas(*frame0);
  ctx.edge_len_now.resize(mesh.num_edges());
  for (int i = 0; i < mesh.num_edges(); ++i) ctx.edge_len_now[i] = frame0->edges[i].length;

  if (motion.is_static) {
    ctx.areas_next = ctx.areas_now;
    for (std::size_t q = 0; q < time_rule.nodes.size(); ++q) {
      ctx.node_times.push_back(t0 + time_rule.nodes[q] * ctx.dt);
      ctx.node_weights.push_back(time_rule.weights[q]);
      ctx.node_frames.push_back(frame0);
      ctx.node_positions.push_back(pos0);
    }
    return ctx;
  }

  ctx.areas_next = cell_areas(flat_frame(mesh, positions_at(mesh, motion, t1)));
  for (std::size_t q = 0; q < time_rule.nodes.size(); ++q) {
    const double tq = t0 + time_rule.nodes[q] * ctx.dt;
    const auto pos = std::make_shared<Positions>(positions_at(mesh, motion, tq));
    ctx.node_times.push_back(tq);
    ctx.node_weights.push_back(time_rule.weights[q]);
    ctx.node_frames.push_back(std::make_shared<FlatFrame>(flat_frame(mesh, *pos)));
    ctx.node_positions.push_back(pos);
  }
  return ctx;
}

CurvedStepContext curved_step_context(const TriMesh& mesh, const SurfaceMotion& motion,
                                      const SphereSurface& sphere, double t0, double t1,
                                      const IntervalRule& time_rule) {
  CurvedStepContext ctx;
  ctx.mesh = &mesh;
  ctx.t0 = t0;
  ctx.t1 = t1;
  ctx.dt = t1 - t0;
  const auto pos0 = std::make_shared<Positions>(positions_at(mesh, motion, t0));
  const auto frame0 = std::make_shared<CurvedFrame>(curved_frame(mesh, *pos0, sphere, t0));
  ctx.areas_now = frame0->cell_area;
  ctx.edge_len_now = frame0->edge_length;

  if (motion.is_static) {
    ctx.areas_next = ctx.areas_now;
    for (std::size_t q = 0; q < time_rule.nodes.size(); ++q) {
      ctx.node_times.push_back(t0 + time_rule.nodes[q] * ctx.dt);
      ctx.node_weights.push_back(time_rule.weights[q]);
      ctx.node_frames.push_back(frame0);
      ctx.node_positions.push_back(pos0);
    }
    ctx.uniform_edge_scaling = true;
    return ctx;
  }

  ctx.areas_next = curved_frame(mesh, positions_at(mesh, motion, t1), sphere, t1).cell_area;
  ctx.uniform_edge_scaling = true;
  for (std::size_t q = 0; q < time_rule.nodes.size(); ++q) {
    const double tq = t0 + time_rule.nodes[q] * ctx.dt;
    const auto pos = std::make_shared<Positions>(positions_at(mesh, motion, tq));
    const auto frame = std::make_shared<CurvedFrame>(curved_frame(mesh, *pos, sphere, tq));
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0.0;
    for (int i = 0; i < mesh.num_edges(); ++i) {
      const double r = frame->edge_length[i] / ctx.edge_len_now[i];
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
    if (rmax - rmin > 1e-12 * rmax) ctx.uniform_edge_scaling = false;
    ctx.node_times.push_back(tq);
    ctx.node_weights.push_back(time_rule.weights[q]);
    ctx.node_frames.push_back(frame);
    ctx.node_positions.push_back(pos);
  }
  return ctx;
}

double lf_flux_flat(double u, double v, const FlatStepContext& ctx, int edge,
                    const FluxField& flux, const IntervalRule& edge_rule) {
  const Edge& e = ctx.mesh->edges()[edge];
  double central = 0.0;
  for (std::size_t q = 0; q < ctx.node_times.size(); ++q) {
    const Positions& pos = *ctx.node_positions[q];
    const FlatEdgeGeom& eg = ctx.node_frames[q]->edges[edge];
    const double tq = ctx.node_times[q];
    const Vec3 mu = eg.conormal;
    const double integral =
        quad_edge(edge_rule, pos[e.v0], pos[e.v1], [&](const Vec3& x) {
          return 0.5 * (flux.eval(u, x, tq) + flux.eval(v, x, tq)).dot(mu);
        });
    central += ctx.node_weights[q] * (integral / eg.length);
  }
  return central + flux.lambda * (u - v);
}

double lf_flux_curved(double u, double v, const CurvedStepContext& ctx, int edge,
                      const FluxField& flux, bool allow_quadrature_fallback) {
  return lf_flux_curved_impl(u, v, ctx, edge, flux, false, allow_quadrature_fallback);
}

std::vector<double> flat_cell_increment(const std::vector<double>& left_trace,
                                        const std::vector<double>& right_trace,
                                        const FlatStepContext& ctx, const FluxField& flux,
                                        const IntervalRule& edge_rule) {
  const TriMesh& mesh = *ctx.mesh;
  const std::size_t ne = static_cast<std::size_t>(mesh.num_edges());
  std::vector<double> edge_flux(ne);
  parallel_for(ne, [&](std::size_t i) {
    edge_flux[i] = ctx.edge_len_now[i] * lf_flux_flat(left_trace[i], right_trace[i], ctx,
                                                      static_cast<int>(i), flux, edge_rule);
  });
  std::vector<double> acc(mesh.num_cells(), 0.0);
  for (std::size_t i = 0; i < ne; ++i) {
    const Edge& e = mesh.edges()[i];
    acc[e.left] += edge_flux[i];
    acc[e.right] -= edge_flux[i];
  }
  std::vector<double> inc(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    inc[c] = -(ctx.dt / ctx.areas_next[c]) * acc[c];
  }
  return inc;
}

CellField step_flat(const CellField& state, const FlatStepContext& ctx,
                    const FluxField& flux, const IntervalRule& edge_rule) {
  const TriMesh& mesh = *ctx.mesh;
  std::vector<double> uL(mesh.num_edges()), uR(mesh.num_edges());
  traces_from_cells(mesh, state.values, [&](int i, double l, double r) {
    uL[i] = l;
    uR[i] = r;
  });
  const std::vector<double> inc = flat_cell_increment(uL, uR, ctx, flux, edge_rule);
  CellField next;
  next.mesh = state.mesh;
  next.time = ctx.t1;
  next.values.resize(state.values.size());
  for (std::size_t c = 0; c < state.values.size(); ++c) {
    next.values[c] = (ctx.areas_now[c] / ctx.areas_next[c]) * state.values[c] + inc[c];
  }
  check_finite(next.values, ctx.t1);
  return next;
}

CellField step_curved(const CellField& state, const CurvedStepContext& ctx,
                      const FluxField& flux, bool allow_quadrature_fallback) {
  const TriMesh& mesh = *ctx.mesh;
  std::vector<double> uL(mesh.num_edges()), uR(mesh.num_edges());
  traces_from_cells(mesh, state.values, [&](int i, double l, double r) {
    uL[i] = l;
    uR[i] = r;
  });
  const std::vector<double> inc =
      curved_cell_increment(uL, uR, ctx, flux, allow_quadrature_fallback);
  CellField next;
  next.mesh = state.mesh;
  next.time = ctx.t1;
  next.values.resize(state.values.size());
  for (std::size_t c = 0; c < state.values.size(); ++c) {
    next.values[c] = (ctx.areas_now[c] / ctx.areas_next[c]) * state.values[c] + inc[c];
  }
  check_finite(next.values, ctx.t1);
  return next;
}

CellField init_flat(const TriMesh& mesh, const Positions& positions,
                    const std::function<double(const Vec3&)>& u0, const TriangleRule& rule) {
  CellField field;
  field.mesh = &mesh;
  field.time = 0.0;
  field.values.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.triangles()[c];
    const Vec3& p0 = positions[t[0]];
    const Vec3& p1 = positions[t[1]];
    const Vec3& p2 = positions[t[2]];
    const double area = triangle_area(p0, p1, p2);
    if (!(area > 0.0)) throw GeometryError("degenerate cell " + std::to_string(c));
    field.values[c] = quad_cell(rule, p0, p1, p2, u0) / area;
  }
  return field;
}

CellField init_flat_adaptive(const TriMesh& mesh, const Positions& positions,
                             const std::function<double(const Vec3&)>& u0, double tol) {
  CellField field;
  field.mesh = &mesh;
  field.time = 0.0;
  field.values.resize(mesh.num_cells());
  parallel_for(mesh.num_cells(), [&](std::size_t c) {
    const auto& t = mesh.triangles()[c];
    field.values[c] = flat_cell_mean_adaptive(u0, positions[t[0]], positions[t[1]],
                                              positions[t[2]], tol);
  });
  return field;
}

CellField init_curved(const TriMesh& mesh, const Positions& positions,
                      const std::function<double(const Vec3&)>& u0,
                      const SphereSurface& sphere, double tol) {
  const double R = sphere.radius(0.0);
  std::vector<Vec3> unit(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    unit[i] = (positions[i] - sphere.center).normalized();
  }
  CellField field;
  field.mesh = &mesh;
  field.time = 0.0;
  field.values.resize(mesh.num_cells());
  parallel_for(mesh.num_cells(), [&](std::size_t c) {
    const auto& t = mesh.triangles()[c];
    field.values[c] = curved_cell_mean(u0, unit[t[0]], unit[t[1]], unit[t[2]], R, tol);
  });
  return field;
}

double l1_diff(const CellField& a, const CellField& b, const std::vector<double>& weights) {
  if (a.values.size() != b.values.size() || a.values.size() != weights.size()) {
    throw ParameterError("l1_diff size mismatch");
  }
  double acc = 0.0;
  for (std::size_t c = 0; c < weights.size(); ++c) {
    acc += weights[c] * std::abs(a.values[c] - b.values[c]);
  }
  return acc;
}

double total_mass(const CellField& state, const std::vector<double>& areas) {
  if (state.values.size() != areas.size()) throw ParameterError("mass size mismatch");
  double acc = 0.0;
  for (std::size_t c = 0; c < areas.size(); ++c) acc += areas[c] * state.values[c];
  return acc;
}

double max_relative_mass_drift(const StepLog& log, double scale) {
  if (log.empty()) return 0.0;
  const double m0 = log.front().mass;
  double drift = 0.0;
  for (const auto& row : log) drift = std::max(drift, std::abs(row.mass - m0));
  return drift / std::max(scale, 1e-300);
}

RunResult run(SchemeKind scheme, const TriMesh& mesh, const SurfaceMotion& motion,
              const FluxField& flux, const std::function<double(const Vec3&)>& u0,
              double T, const SolverOptions& opts) {
  if (T < 0.0) throw ParameterError("negative time horizon");
  if (scheme == SchemeKind::curved && !opts.sphere) {
    throw ParameterError("the curved scheme requires a sphere oracle");
  }

  const Positions pos0 = positions_at(mesh, motion, 0.0);
  CellField state;
  if (scheme == SchemeKind::curved) {
    state = init_curved(mesh, pos0, u0, *opts.sphere, opts.init_tol);
  } else if (opts.adaptive_init) {
    state = init_flat_adaptive(mesh, pos0, u0, opts.init_tol);
  } else {
    state = init_flat(mesh, pos0, u0, opts.cell_rule);
  }

  auto areas_at = [&](const Positions& pos, double t) {
    if (scheme == SchemeKind::curved) {
      return curved_frame(mesh, pos, *opts.sphere, t).cell_area;
    }
    return cell_areas(flat_frame(mesh, pos));
  };

  auto log_row = [&](int step, double t, double dt, const CellField& field,
                     const std::vector<double>& areas) {
    StepLogRow row;
    row.step = step;
    row.t = t;
    row.dt = dt;
    row.mass = total_mass(field, areas);
    const auto [mn, mx] = std::minmax_element(field.values.begin(), field.values.end());
    row.min = field.values.empty() ? 0.0 : *mn;
    row.max = field.values.empty() ? 0.0 : *mx;
    return row;
  };

  RunResult result;
  result.log.push_back(log_row(0, 0.0, 0.0, state, areas_at(pos0, 0.0)));
  if (T == 0.0) {
    result.field = std::move(state);
    return result;
  }

  std::shared_ptr<const Positions> static_pos;
  std::shared_ptr<const FlatFrame> static_flat;
  std::shared_ptr<const CurvedFrame> static_curved;
  if (motion.is_static) {
    static_pos = std::make_shared<Positions>(pos0);
    if (scheme == SchemeKind::curved) {
      static_curved =
          std::make_shared<CurvedFrame>(curved_frame(mesh, pos0, *opts.sphere, 0.0));
    } else {
      static_flat = std::make_shared<FlatFrame>(flat_frame(mesh, pos0));
    }
  }

  MeshQuality quality = mesh_quality(mesh, pos0);
  double t = 0.0;
  int step = 0;
  while (t < T) {
    ++step;
    if (!motion.is_static) quality = mesh_quality(mesh, positions_at(mesh, motion, t));
    double dt = cfl_dt(quality, flux, opts.cfl_factor, T);
    if (t + dt >= T || T - (t + dt) < 1e-12 * T) dt = T - t;

    if (!motion.is_static) {
      // Cap dt so no cell area changes by more than 5% over the step.
      const std::vector<double> a0 = areas_at(positions_at(mesh, motion, t), t);
      for (int attempt = 0; attempt < 60; ++attempt) {
        const std::vector<double> a1 =
            areas_at(positions_at(mesh, motion, t + dt), t + dt);
        double change = 0.0;
        for (std::size_t c = 0; c < a0.size(); ++c) {
          change = std::max(change, std::abs(a1[c] / a0[c] - 1.0));
        }
        if (change <= kAreaChangeCap) break;
        dt *= 0.9 * kAreaChangeCap / change;
      }
    }

    const double t1 = (T - (t + dt) < 1e-12 * std::max(T, 1.0)) ? T : t + dt;
    try {
      if (scheme == SchemeKind::curved) {
        const CurvedStepContext ctx =
            motion.is_static
                ? static_curved_ctx(mesh, static_curved, static_pos, t, t1, opts.time_rule)
                : curved_step_context(mesh, motion, *opts.sphere, t, t1, opts.time_rule);
        state = step_curved(state, ctx, flux, opts.allow_quadrature_flux_fallback);
      } else {
        const FlatStepContext ctx =
            motion.is_static
                ? static_flat_ctx(mesh, static_flat, static_pos, t, t1, opts.time_rule)
                : flat_step_context(mesh, motion, t, t1, opts.time_rule);
        state = step_flat(state, ctx, flux, opts.edge_rule);
      }
    } catch (const BlowUpError& err) {
      throw BlowUpError(std::string(err.what()) + " (step " + std::to_string(step) + ")");
    }
    t = t1;

    if (motion.is_static) {
      result.log.push_back(log_row(step, t, t1 - result.log.back().t, state,
                                   scheme == SchemeKind::curved ? static_curved->cell_area
                                                                : cell_areas(*static_flat)));
      if (opts.step_callback) opts.step_callback(step, state, *static_pos);
    } else {
      const Positions pos = positions_at(mesh, motion, t);
      result.log.push_back(log_row(step, t, t1 - result.log.back().t, state, areas_at(pos, t)));
      if (opts.step_callback) opts.step_callback(step, state, pos);
    }
  }
  result.field = std::move(state);
  return result;
}

void write_step_log_csv(const StepLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open " + path);
  out << "step,t,dt,mass,min,max\n";
  char buf[160];
  for (const auto& row : log) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.step, row.t,
                  row.dt, row.mass, row.min, row.max);
    out << buf;
  }
}

}  // namespace surffv
