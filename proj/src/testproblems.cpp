#include "surffv/testproblems.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "surffv/second_order.hpp"
#include "surffv/vtk.hpp"

namespace surffv {

namespace {

double run_scale(const StepLog& log, double total_area) {
  const double amp = std::max({1.0, std::abs(log.front().min), std::abs(log.front().max)});
  return std::max(std::abs(log.front().mass), total_area * amp);
}

std::vector<double> flat_areas(const TriMesh& mesh, const Positions& pos) {
  std::vector<double> a(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.triangles()[c];
    a[c] = triangle_area(pos[t[0]], pos[t[1]], pos[t[2]]);
  }
  return a;
}

struct Defaults {
  std::pair<int, int> levels;
  double lambda;
  double T;
  double init_tol;
};

Defaults tp_defaults(int tp, const FluxField& flux) {
  switch (tp) {
    case 1: return {{0, 4}, 0.0, 1.0, 1e-8};
    case 2: return {{0, 4}, M_PI, 1.0, 1e-3};
    case 3: return {{0, 4}, M_PI, 1.0, 1e-3};
    case 4: return {{0, 4}, M_PI, 1.0, 1e-3};
    case 5: return {{0, 4}, 0.0, 1.0, 1e-8};
    case 6: return {{0, 4}, flux.lambda, 1.0, 1e-8};
    case 7: return {{1, 1}, flux.lambda, 4.0, 1e-8};
    default: throw ParameterError("test problem id must be in 1..7");
  }
}

FluxField base_flux(int tp) {
  switch (tp) {
    case 1:
    case 5: return make_flux(FluxKind::stationary_V, 0.0, 1.0);
    case 2: return make_flux(FluxKind::linear_W, 0.0, 1.0);
    case 3: return make_flux(FluxKind::burgers_V, 0.0, 1.0);
    case 4: return make_flux(FluxKind::two_dim, 0.0, 1.0);
    case 6: return make_flux(FluxKind::linear_V, 0.0, 0.014);
    case 7: return make_flux(FluxKind::torus_burgers, 0.0, 2.5);
    default: throw ParameterError("test problem id must be in 1..7");
  }
}

std::function<double(const Vec3&)> initial_data(int tp) {
  switch (tp) {
    case 1:
    case 5: return [](const Vec3&) { return 0.0; };
    case 2:
    case 3:
    case 4: return indicator_initial;
    case 6: return tp6_initial;
    case 7: return [](const Vec3&) { return 1.0; };
    default: throw ParameterError("test problem id must be in 1..7");
  }
}

struct Criterion {
  bool pass = false;
  std::string detail;
};

Criterion check_table_criterion(int tp, double lambda, const ConvergenceTable& table) {
  Criterion out;
  std::ostringstream msg;
  if (table.rows.size() < 2 || !table.finest().eoc) {
    out.pass = false;
    out.detail = "needs at least two levels for an EOC";
    return out;
  }
  const double finest = *table.finest().eoc;
  switch (tp) {
    case 1:
      if (lambda == 0.0) {
        bool increasing = true;
        for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
          if (table.rows[i].level >= 2 && table.rows[i].eoc && table.rows[i + 1].eoc &&
              !(*table.rows[i + 1].eoc > *table.rows[i].eoc)) {
            increasing = false;
          }
        }
        out.pass = finest >= 0.85 && finest <= 1.1 && increasing;
        msg << "finest EOC " << finest << " in [0.85,1.1], increasing from level 2: "
            << (increasing ? "yes" : "no");
      } else {
        out.pass = finest >= 1.15;
        msg << "finest EOC " << finest << " >= 1.15 (lambda=" << lambda << ")";
      }
      break;
    case 2:
    case 3:
    case 4:
      out.pass = finest >= 1.6;
      msg << "finest EOC " << finest << " >= 1.6";
      break;
    case 5:
      out.pass = finest >= 0.85 && finest <= 1.1;
      msg << "finest EOC " << finest << " in [0.85,1.1]";
      break;
    case 6:
      out.pass = finest >= 1.3;
      msg << "finest EOC " << finest << " >= 1.3";
      break;
    default:
      out.pass = false;
      msg << "no table criterion";
  }
  out.detail = msg.str();
  return out;
}

}  // namespace

IntervalRule interval_rule_for_order(int order) {
  switch (order) {
    case 1: return IntervalRule::midpoint();
    case 3: return IntervalRule::gauss2();
    case 5: return IntervalRule::gauss3();
    default: throw ParameterError("supported interval quadrature orders: 1, 3, 5");
  }
}

TriangleRule triangle_rule_for_order(int order) {
  switch (order) {
    case 1: return TriangleRule::centroid();
    case 2: return TriangleRule::edge_midpoints();
    case 4: return TriangleRule::dunavant4();
    default: throw ParameterError("supported triangle quadrature orders: 1, 2, 4");
  }
}

double tp6_initial(const Vec3& x) {
  const Vec3 x0(1.0, 0.0, 0.0);
  const double r = (x0 - x).norm() / 0.74;
  if (r >= 1.0) return 0.0;
  const double r2 = r * r;
  const double denom = (1.0 - r2) * (1.0 - r2);
  return 0.1 * std::exp(-2.0 * (1.0 + r2) / denom);
}

double tp6_exact_solution(const Vec3& x, double t) {
  // Inverse flow of V: rotate by +2*pi*t about the x3-axis.
  const double ang = 2.0 * M_PI * t;
  const double c = std::cos(ang);
  const double s = std::sin(ang);
  return tp6_initial(Vec3(c * x.x() - s * x.y(), s * x.x() + c * x.y(), x.z()));
}

double indicator_initial(const Vec3& x) { return x.x() > 0.15 ? 1.0 : 0.0; }

TestProblemResult run_test_problem(const RunConfig& config) {
  if (config.tp < 1 || config.tp > 7) throw ParameterError("test problem id must be in 1..7");
  FluxField flux = base_flux(config.tp);
  const Defaults def = tp_defaults(config.tp, flux);
  if (config.lambda) flux.lambda = *config.lambda;
  else flux.lambda = def.lambda;

  const auto levels = config.levels.value_or(def.levels);
  if (levels.first < 0 || levels.second < levels.first) {
    throw ParameterError("bad level range");
  }
  const double T = config.T.value_or(def.T);
  const auto u0 = initial_data(config.tp);

  SolverOptions opts;
  opts.time_rule = interval_rule_for_order(config.p3);
  opts.edge_rule = interval_rule_for_order(config.p2);
  opts.cell_rule = triangle_rule_for_order(config.p1);
  opts.cfl_factor = config.cfl_factor;
  opts.init_tol = config.init_tol.value_or(def.init_tol);
  opts.sphere = SphereSurface::unit();

  const bool want_artifacts = !config.out_dir.empty();
  if (want_artifacts) std::filesystem::create_directories(config.out_dir);

  TestProblemResult result;
  result.table.label = "tp" + std::to_string(config.tp);

  const SurfaceMotion still = SurfaceMotion::identity(std::max(T, 1.0));
  const bool second_order = config.second_order || config.tp == 5 || config.tp == 6;

  if (config.tp == 7) {
    const int level = levels.second;
    if (level > 5) throw CapacityError("torus level above 5 exceeds the desk-scale budget");
    const TriMesh mesh = build_torus(1.0, 0.4, {16 << level, 8 << level});
    const SurfaceMotion motion = SurfaceMotion::torus_deformation(T);

    SolverOptions tp7 = opts;
    tp7.sphere.reset();
    int frames = 0;
    if (want_artifacts) {
      write_vtk_frame(mesh, positions_at(mesh, motion, 0.0),
                      std::vector<double>(mesh.num_cells(), 1.0),
                      config.out_dir + "/tp7_frame_initial.vtk");
      if (config.vtk_every > 0) {
        tp7.step_callback = [&](int step, const CellField& field, const Positions& pos) {
          if (step % config.vtk_every != 0) return;
          ++frames;
          write_vtk_frame(mesh, pos, field.values,
                          config.out_dir + "/tp7_frame_" + std::to_string(step) + ".vtk");
        };
      }
    }

    const RunResult rr = run(SchemeKind::flat, mesh, motion, flux, u0, T, tp7);
    const Positions posT = positions_at(mesh, motion, T);
    if (want_artifacts) {
      write_vtk_frame(mesh, posT, rr.field.values, config.out_dir + "/tp7_frame_final.vtk");
      write_step_log_csv(rr.log, config.out_dir + "/tp7_steps.csv");
      result.artifacts.push_back(config.out_dir + "/tp7_frame_final.vtk");
    }
    double total_area = 0.0;
    for (double a : flat_areas(mesh, positions_at(mesh, motion, 0.0))) total_area += a;
    result.max_mass_drift = max_relative_mass_drift(rr.log, run_scale(rr.log, total_area));
    const auto [mn, mx] = std::minmax_element(rr.field.values.begin(), rr.field.values.end());
    result.solution_range = *mx - *mn;
    result.pass = result.solution_range > 0.05 && result.max_mass_drift < 1e-11;
    std::ostringstream msg;
    msg << "solution range " << result.solution_range << " > 0.05, mass drift "
        << result.max_mass_drift << " < 1e-11";
    result.criterion = msg.str();
    return result;
  }

  // Sphere problems: one row per refinement level.
  TriMesh mesh = build_icosphere(levels.first);
  for (int level = levels.first; level <= levels.second; ++level) {
    if (level > levels.first) mesh = refine(mesh, sphere_projection(1.0));
    const Positions& pos = mesh.vertices();
    const MeshQuality quality = mesh_quality(mesh, pos);
    const std::vector<double> weights = flat_areas(mesh, pos);
    double total_area = 0.0;
    for (double a : weights) total_area += a;

    CellField reference;  // curved solution or exact solution means
    CellField computed;   // flat (or second-order flat) solution
    StepLog flat_log, curved_log;

    if (config.tp == 1) {
      // The zero state is stationary for the exact-flux scheme, so the
      // reference field is identically zero.
      reference = init_curved(mesh, pos, u0, *opts.sphere, opts.init_tol);
      if (second_order) {
        SecondOrderOptions so;
        so.base = opts;
        const RunResult rr = run_second_order(mesh, flux, u0, T, so);
        computed = rr.field;
        flat_log = rr.log;
      } else {
        const RunResult rr = run(SchemeKind::flat, mesh, still, flux, u0, T, opts);
        computed = rr.field;
        flat_log = rr.log;
      }
    } else if (config.tp == 5) {
      reference = init_curved(mesh, pos, u0, *opts.sphere, opts.init_tol);
      SecondOrderOptions so;
      so.base = opts;
      const RunResult rr = run_second_order(mesh, flux, u0, T, so);
      computed = rr.field;
      flat_log = rr.log;
    } else if (config.tp == 6) {
      // Error against cell averages of the transported exact solution.
      reference = init_flat_adaptive(
          mesh, pos, [&](const Vec3& x) { return tp6_exact_solution(x, T); }, opts.init_tol);
      SecondOrderOptions so;
      so.base = opts;
      const RunResult rr = run_second_order(mesh, flux, u0, T, so);
      computed = rr.field;
      flat_log = rr.log;
    } else {
      const RunResult curved = run(SchemeKind::curved, mesh, still, flux, u0, T, opts);
      reference = curved.field;
      curved_log = curved.log;
      if (second_order) {
        SecondOrderOptions so;
        so.base = opts;
        const RunResult rr = run_second_order(mesh, flux, u0, T, so);
        computed = rr.field;
        flat_log = rr.log;
      } else {
        const RunResult rr = run(SchemeKind::flat, mesh, still, flux, u0, T, opts);
        computed = rr.field;
        flat_log = rr.log;
      }
    }

    if (!flat_log.empty()) {
      result.max_mass_drift = std::max(
          result.max_mass_drift, max_relative_mass_drift(flat_log, run_scale(flat_log, total_area)));
    }
    if (!curved_log.empty()) {
      result.max_mass_drift =
          std::max(result.max_mass_drift,
                   max_relative_mass_drift(curved_log, run_scale(curved_log, total_area)));
    }

    result.table.add(level, quality.h, mesh.num_cells(),
                     l1_diff(computed, reference, weights));

    if (level == levels.second) {
      const auto [mn, mx] = std::minmax_element(computed.values.begin(), computed.values.end());
      result.solution_range = *mx - *mn;
      if (want_artifacts) {
        const std::string path =
            config.out_dir + "/tp" + std::to_string(config.tp) + "_final.vtk";
        write_vtk_frame(mesh, pos, computed.values, path);
        result.artifacts.push_back(path);
      }
    }
  }

  if (config.tp == 1) {
    // Self-consistency: a computed curved run conserves the zero state
    // exactly (checked at the coarsest level; the reference above is the
    // same stationary field).
    const TriMesh coarse = build_icosphere(levels.first);
    const RunResult curved = run(SchemeKind::curved, coarse, still, flux, u0, T, opts);
    double max_abs = 0.0;
    for (double v : curved.field.values) max_abs = std::max(max_abs, std::abs(v));
    result.curved_field_exact_zero = max_abs == 0.0;
  }

  if (want_artifacts) {
    const std::string path = config.out_dir + "/tp" + std::to_string(config.tp) + "_table.csv";
    write_table_csv(result.table, path);
    result.artifacts.push_back(path);
  }

  const Criterion crit = check_table_criterion(config.tp, flux.lambda, result.table);
  result.pass = crit.pass;
  result.criterion = crit.detail;
  if (config.tp == 1 && !result.curved_field_exact_zero) {
    result.pass = false;
    result.criterion += "; curved run deviated from the exact zero state";
  }
  return result;
}

}  // namespace surffv
