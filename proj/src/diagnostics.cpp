#include "surffv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "surffv/geometry.hpp"
#include "surffv/solver.hpp"

namespace surffv {

namespace {

// Deterministic per-cell sample points: vertices, edge midpoints, centroid.
std::vector<Vec3> cell_samples(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
  return {p0, p1, p2, 0.5 * (p0 + p1), 0.5 * (p1 + p2), 0.5 * (p2 + p0),
          (p0 + p1 + p2) / 3.0};
}

// Sample points along an edge: endpoints, midpoint, two Gauss nodes.
std::vector<Vec3> edge_samples(const Vec3& a, const Vec3& b) {
  const double g = 0.5 / std::sqrt(3.0);
  return {a, b, 0.5 * (a + b), a + (0.5 - g) * (b - a), a + (0.5 + g) * (b - a)};
}

OrderReport make_report(std::string name, std::vector<double> h, std::vector<double> values,
                        double expected) {
  OrderReport r;
  r.quantity = std::move(name);
  r.h = std::move(h);
  r.values = std::move(values);
  r.expected = expected;
  r.slope = fit_order(r.h, r.values);
  return r;
}

int third_vertex(const TriMesh& mesh, int cell, const Edge& e) {
  for (int v : mesh.triangles()[cell]) {
    if (v != e.v0 && v != e.v1) return v;
  }
  throw GeometryError("edge not part of its cell");
}

}  // namespace

double fit_order(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size()) throw ParameterError("fit_order size mismatch");
  if (h.size() < 3) throw ParameterError("fit_order needs at least three levels");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0)) throw ParameterError("fit_order: h must be positive");
    if (e[i] <= 0.0) {
      std::cerr << "fit_order: excluding zero error at h=" << h[i] << "\n";
      continue;
    }
    x.push_back(std::log(h[i]));
    y.push_back(std::log(e[i]));
  }
  if (x.size() < 2) throw ToleranceError("fit_order: fewer than two nonzero errors");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<TriMesh> icosphere_family(int level_lo, int level_hi) {
  if (level_lo < 0 || level_hi < level_lo) throw ParameterError("bad icosphere level range");
  std::vector<TriMesh> family;
  TriMesh mesh = build_icosphere(level_lo);
  family.push_back(mesh);
  for (int l = level_lo; l < level_hi; ++l) {
    mesh = refine(mesh, sphere_projection(1.0));
    family.push_back(mesh);
  }
  return family;
}

OrderReport normal_deviation(const std::vector<TriMesh>& family, const SphereSurface& sphere) {
  std::vector<double> hs, maxima;
  for (const TriMesh& mesh : family) {
    const Positions& pos = mesh.vertices();
    const MeshQuality q = mesh_quality(mesh, pos);
    double worst = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const auto& t = mesh.triangles()[c];
      const Vec3 nu_K = triangle_normal(pos[t[0]], pos[t[1]], pos[t[2]]);
      for (const Vec3& y : cell_samples(pos[t[0]], pos[t[1]], pos[t[2]])) {
        worst = std::max(worst, (sphere.normal(y, 0.0) - nu_K).norm());
      }
    }
    hs.push_back(q.h);
    maxima.push_back(worst);
  }
  return make_report("normal_deviation", std::move(hs), std::move(maxima), 1.0);
}

std::pair<OrderReport, OrderReport> length_area_ratios(const std::vector<TriMesh>& family,
                                                       const SphereSurface& sphere) {
  const double R = sphere.radius(0.0);
  std::vector<double> hs, edge_dev, area_dev;
  for (const TriMesh& mesh : family) {
    const Positions& pos = mesh.vertices();
    const MeshQuality q = mesh_quality(mesh, pos);
    double we = 0.0, wa = 0.0;
    for (const Edge& e : mesh.edges()) {
      const double flat = (pos[e.v1] - pos[e.v0]).norm();
      const double curved = arc_length((pos[e.v0] - sphere.center).normalized(),
                                       (pos[e.v1] - sphere.center).normalized(), R);
      we = std::max(we, std::abs(curved / flat - 1.0));
    }
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const auto& t = mesh.triangles()[c];
      const double flat = triangle_area(pos[t[0]], pos[t[1]], pos[t[2]]);
      const double curved = spherical_triangle_area(
          (pos[t[0]] - sphere.center).normalized(), (pos[t[1]] - sphere.center).normalized(),
          (pos[t[2]] - sphere.center).normalized(), R);
      wa = std::max(wa, std::abs(curved / flat - 1.0));
    }
    hs.push_back(q.h);
    edge_dev.push_back(we);
    area_dev.push_back(wa);
  }
  return {make_report("edge_length_ratio", hs, std::move(edge_dev), 2.0),
          make_report("cell_area_ratio", std::move(hs), std::move(area_dev), 2.0)};
}

ConormalReports conormal_estimates(const std::vector<TriMesh>& family,
                                   const SphereSurface& sphere) {
  std::vector<double> hs, dev_t, dev_nu, dev_mu;
  double min_align = std::numeric_limits<double>::infinity();
  for (const TriMesh& mesh : family) {
    const Positions& pos = mesh.vertices();
    const MeshQuality q = mesh_quality(mesh, pos);
    const FlatFrame frame = flat_frame(mesh, pos);
    double wt = 0.0, wn = 0.0, wm = 0.0;
    for (int i = 0; i < mesh.num_edges(); ++i) {
      const Edge& e = mesh.edges()[i];
      const Vec3& mu_flat = frame.edges[i].conormal;
      const Vec3 p = (pos[e.v0] - sphere.center).normalized();
      const Vec3 qv = (pos[e.v1] - sphere.center).normalized();
      const Vec3 r = (pos[third_vertex(mesh, e.left, e)] - sphere.center).normalized();
      const Vec3 mu_curved = curved_conormal(p, qv, r);
      const Vec3 plane_normal = p.cross(qv).normalized();
      for (const Vec3& xbar : edge_samples(pos[e.v0], pos[e.v1])) {
        const Vec3 x = (xbar - sphere.center).normalized();  // lift to the sphere
        const Vec3 tangent = plane_normal.cross(x);          // unit tangent to the arc
        wt = std::max(wt, std::abs(mu_flat.dot(tangent)));
        wn = std::max(wn, std::abs(mu_flat.dot(x)));
        wm = std::max(wm, std::abs(mu_flat.dot(mu_curved) - 1.0));
        min_align = std::min(min_align, mu_flat.dot(mu_curved));
      }
    }
    hs.push_back(q.h);
    dev_t.push_back(wt);
    dev_nu.push_back(wn);
    dev_mu.push_back(wm);
  }
  ConormalReports out;
  out.tangent = make_report("conormal_vs_tangent", hs, std::move(dev_t), 2.0);
  out.normal = make_report("conormal_vs_normal", hs, std::move(dev_nu), 1.0);
  out.conormal = make_report("conormal_alignment", std::move(hs), std::move(dev_mu), 2.0);
  out.min_mu_alignment = min_align;
  return out;
}

OrderReport flux_difference(const std::vector<TriMesh>& family, const SphereSurface& sphere,
                            const FluxField& flux, double u_min, double u_max) {
  // The lambda (u - v) terms are common to both fluxes and drop out of the
  // difference, so it is formed with lambda = 0; the report is therefore
  // identical for every diffusion rate.
  FluxField central = flux;
  central.lambda = 0.0;

  std::vector<std::pair<double, double>> states = {
      {u_min, u_min}, {u_max, u_max}, {u_min, u_max}, {0.5 * (u_min + u_max), u_min}};
  std::mt19937 rng(20240709u);
  std::uniform_real_distribution<double> uni(u_min, u_max);
  for (int k = 0; k < 4; ++k) states.emplace_back(uni(rng), uni(rng));

  const SurfaceMotion motion = SurfaceMotion::identity(1.0);
  std::vector<double> hs, maxima;
  for (const TriMesh& mesh : family) {
    const MeshQuality q = mesh_quality(mesh, mesh.vertices());
    const auto flat_ctx = flat_step_context(mesh, motion, 0.0, 1.0, IntervalRule::midpoint());
    const auto curved_ctx =
        curved_step_context(mesh, motion, sphere, 0.0, 1.0, IntervalRule::midpoint());
    double worst = 0.0;
    for (int e = 0; e < mesh.num_edges(); ++e) {
      for (const auto& [u, v] : states) {
        const double fc = lf_flux_curved(u, v, curved_ctx, e, central);
        const double ff = lf_flux_flat(u, v, flat_ctx, e, central, IntervalRule::gauss2());
        worst = std::max(worst, std::abs(fc - ff));
      }
    }
    hs.push_back(q.h);
    maxima.push_back(worst);
  }
  return make_report("flux_difference", std::move(hs), std::move(maxima), 2.0);
}

std::pair<double, double> quotient_extrema(const TriMesh& mesh, const SurfaceMotion& motion,
                                           const SphereSurface& sphere,
                                           const std::vector<double>& t_grid) {
  if (t_grid.size() < 2) throw ParameterError("quotient_extrema needs at least two times");
  double q1 = 0.0, q2 = 0.0;
  Positions pos_n = positions_at(mesh, motion, t_grid.front());
  std::vector<double> curved_n = curved_frame(mesh, pos_n, sphere, t_grid.front()).cell_area;
  std::vector<double> flat_n(mesh.num_cells());
  auto flat_areas = [&](const Positions& pos) {
    std::vector<double> a(mesh.num_cells());
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const auto& t = mesh.triangles()[c];
      a[c] = triangle_area(pos[t[0]], pos[t[1]], pos[t[2]]);
    }
    return a;
  };
  flat_n = flat_areas(pos_n);

  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const Positions pos_next = positions_at(mesh, motion, t_grid[k]);
    const std::vector<double> curved_next =
        curved_frame(mesh, pos_next, sphere, t_grid[k]).cell_area;
    const std::vector<double> flat_next = flat_areas(pos_next);
    for (int c = 0; c < mesh.num_cells(); ++c) {
      q1 = std::max(q1, std::abs(curved_n[c] / flat_n[c] - curved_next[c] / flat_next[c]));
      q2 = std::max(q2, std::abs((flat_n[c] / flat_next[c]) * (curved_next[c] / curved_n[c]) - 1.0));
    }
    curved_n = curved_next;
    flat_n = flat_next;
  }
  return {q1, q2};
}

std::pair<OrderReport, OrderReport> quotient_h_sweep(const std::vector<TriMesh>& family,
                                                     const SurfaceMotion& motion,
                                                     const SphereSurface& sphere, double dt,
                                                     double t_end) {
  std::vector<double> t_grid;
  for (double t = 0.0; t <= t_end + 1e-12; t += dt) t_grid.push_back(t);
  std::vector<double> hs, v1, v2;
  for (const TriMesh& mesh : family) {
    const auto [q1, q2] = quotient_extrema(mesh, motion, sphere, t_grid);
    hs.push_back(mesh_quality(mesh, mesh.vertices()).h);
    v1.push_back(q1);
    v2.push_back(q2);
  }
  return {make_report("quotient_ratio_diff_vs_h", hs, std::move(v1), 1.0),
          make_report("quotient_product_vs_h", std::move(hs), std::move(v2), 1.0)};
}

std::pair<OrderReport, OrderReport> quotient_dt_sweep(const TriMesh& mesh,
                                                      const SurfaceMotion& motion,
                                                      const SphereSurface& sphere,
                                                      const std::vector<double>& dts,
                                                      double t_end) {
  std::vector<double> xs, v1, v2;
  for (double dt : dts) {
    std::vector<double> t_grid;
    for (double t = 0.0; t <= t_end + 1e-12; t += dt) t_grid.push_back(t);
    const auto [q1, q2] = quotient_extrema(mesh, motion, sphere, t_grid);
    xs.push_back(dt);
    v1.push_back(q1);
    v2.push_back(q2);
  }
  return {make_report("quotient_ratio_diff_vs_dt", xs, std::move(v1), 1.0),
          make_report("quotient_product_vs_dt", std::move(xs), std::move(v2), 1.0)};
}

OrderReport distance_bound(const std::vector<TriMesh>& family, const SphereSurface& sphere) {
  std::vector<double> hs, maxima;
  for (const TriMesh& mesh : family) {
    const Positions& pos = mesh.vertices();
    const MeshQuality q = mesh_quality(mesh, pos);
    double worst = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const auto& t = mesh.triangles()[c];
      for (const Vec3& y : cell_samples(pos[t[0]], pos[t[1]], pos[t[2]])) {
        worst = std::max(worst, std::abs(sphere.signed_distance(y, 0.0)));
      }
    }
    hs.push_back(q.h);
    maxima.push_back(worst);
  }
  return make_report("signed_distance_bound", std::move(hs), std::move(maxima), 2.0);
}

namespace {

void finish_report(SuiteOutcome& out, std::ostringstream& msg, const OrderReport& report,
                   const SlopeWindow& window, const std::string& out_dir) {
  const bool ok = window.contains(report.slope);
  msg << report.quantity << ": slope " << report.slope << (ok ? " in [" : " OUTSIDE [")
      << window.lo << "," << window.hi << "]  ";
  out.pass = out.pass && ok;
  out.reports.push_back(report);
  if (!out_dir.empty()) {
    write_order_report_csv(report, out_dir + "/" + report.quantity + ".csv");
  }
}

}  // namespace

SuiteOutcome run_diagnostic_suite(const std::string& suite, int level_lo, int level_hi,
                                  const std::string& out_dir) {
  const SphereSurface sphere = SphereSurface::unit();
  SuiteOutcome out;
  out.pass = true;
  std::ostringstream msg;

  if (suite == "normals") {
    const auto family = icosphere_family(level_lo, level_hi);
    finish_report(out, msg, normal_deviation(family, sphere), {0.85, 1.15}, out_dir);
  } else if (suite == "ratios") {
    const auto family = icosphere_family(level_lo, level_hi);
    const auto [edge, area] = length_area_ratios(family, sphere);
    finish_report(out, msg, edge, {1.8, 2.2}, out_dir);
    finish_report(out, msg, area, {1.8, 2.2}, out_dir);
  } else if (suite == "conormals") {
    const auto family = icosphere_family(level_lo, level_hi);
    const ConormalReports reports = conormal_estimates(family, sphere);
    finish_report(out, msg, reports.tangent, {1.8, 2.2}, out_dir);
    finish_report(out, msg, reports.normal, {0.85, 1.15}, out_dir);
    finish_report(out, msg, reports.conormal, {1.8, 2.2}, out_dir);
    const bool sign_ok = reports.min_mu_alignment > 0.0;
    msg << "min <mu_flat,mu> " << reports.min_mu_alignment << (sign_ok ? " > 0  " : " <= 0  ");
    out.pass = out.pass && sign_ok;
  } else if (suite == "flux") {
    const auto family = icosphere_family(level_lo, level_hi);
    FluxField flux = make_flux(FluxKind::stationary_V);
    flux.lambda = 0.0;
    const OrderReport zero = flux_difference(family, sphere, flux, 0.0, 1.0);
    flux.lambda = M_PI;
    const OrderReport pi = flux_difference(family, sphere, flux, 0.0, 1.0);
    finish_report(out, msg, zero, {1.8, 2.2}, out_dir);
    const bool identical = zero.values == pi.values && zero.h == pi.h;
    msg << "reports for lambda=0 and lambda=pi " << (identical ? "identical  " : "DIFFER  ");
    out.pass = out.pass && identical;
  } else if (suite == "quotients") {
    const int hi = std::max(level_lo, level_hi);
    const auto family = icosphere_family(std::min(level_lo, hi), hi);
    const auto radius = [](double t) { return 1.0 + 0.5 * t; };
    const SurfaceMotion motion = SurfaceMotion::squeezed_sphere(radius, 0.3, 1.0);
    const SphereSurface moving = SphereSurface::scaled(radius);

    const auto [h1, h2] = quotient_h_sweep(family, motion, moving, 0.05, 0.4);
    finish_report(out, msg, h1, {0.8, 1.2}, out_dir);
    finish_report(out, msg, h2, {0.8, 1.2}, out_dir);

    const TriMesh& mid = family[std::min<std::size_t>(family.size() - 1, 1)];
    const auto [d1, d2] =
        quotient_dt_sweep(mid, motion, moving, {0.2, 0.1, 0.05, 0.025}, 0.4);
    finish_report(out, msg, d1, {0.8, 1.2}, out_dir);
    finish_report(out, msg, d2, {0.8, 1.2}, out_dir);

    const auto [s1, s2] =
        quotient_extrema(mid, SurfaceMotion::identity(1.0), sphere, {0.0, 0.25, 0.5});
    const bool static_zero = s1 == 0.0 && s2 == 0.0;
    msg << "static case " << (static_zero ? "exactly zero  " : "NONZERO  ");
    out.pass = out.pass && static_zero;
  } else {
    throw ParameterError("unknown diagnostic suite: " + suite);
  }
  out.summary = msg.str();
  return out;
}

void write_order_report_csv(const OrderReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open " + path);
  out << "level,h,value\n";
  char buf[96];
  for (std::size_t i = 0; i < report.h.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i, report.h[i], report.values[i]);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "# slope=%.6f expected=%.3f\n", report.slope,
                report.expected);
  out << buf;
}

}  // namespace surffv
