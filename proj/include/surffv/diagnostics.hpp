#ifndef SURFFV_DIAGNOSTICS_HPP
#define SURFFV_DIAGNOSTICS_HPP

#include <string>
#include <utility>
#include <vector>

#include "surffv/flux.hpp"
#include "surffv/mesh.hpp"
#include "surffv/motion.hpp"
#include "surffv/sphere.hpp"
#include "surffv/types.hpp"

namespace surffv {

// Measured maxima of one geometric quantity across a refinement family,
// with the log-log least-squares slope and the expected order.
struct OrderReport {
  std::string quantity;
  std::vector<double> h;
  std::vector<double> values;
  double slope = 0.0;
  double expected = 0.0;
};

// Least-squares slope of log(e) against log(h). Zero errors (exact cases)
// are excluded with a warning on stderr. Requires at least three levels.
double fit_order(const std::vector<double>& h, const std::vector<double>& e);

// Icospheres from level lo to level hi inclusive.
std::vector<TriMesh> icosphere_family(int level_lo, int level_hi);

// Max over cells and sample points of || nu(a(y)) - nu_K ||; order 1.
OrderReport normal_deviation(const std::vector<TriMesh>& family, const SphereSurface& sphere);

// Max deviations of |e|/|e_flat| and |K|/|K_flat| from 1; order 2 each.
std::pair<OrderReport, OrderReport> length_area_ratios(const std::vector<TriMesh>& family,
                                                       const SphereSurface& sphere);

// Conormal alignment maxima: |<mu_flat, t>| (order 2), |<mu_flat, nu>|
// (order 1), |<mu_flat, mu> - 1| (order 2), sampled along lifted edges.
struct ConormalReports {
  OrderReport tangent;
  OrderReport normal;
  OrderReport conormal;
  double min_mu_alignment = 0.0;  // smallest <mu_flat, mu>; positive validates the sign choice
};
ConormalReports conormal_estimates(const std::vector<TriMesh>& family,
                                   const SphereSurface& sphere);

// Max over edges and sampled states of |curved flux - flat flux| with the
// same diffusion rate; the diffusive terms cancel in the difference, so the
// report is independent of lambda. Order 2.
OrderReport flux_difference(const std::vector<TriMesh>& family, const SphereSurface& sphere,
                            const FluxField& flux, double u_min, double u_max);

// Maxima over cells and consecutive time pairs of the two area-quotient
// quantities (curved/flat ratio difference, and the product deviation).
std::pair<double, double> quotient_extrema(const TriMesh& mesh, const SurfaceMotion& motion,
                                           const SphereSurface& sphere,
                                           const std::vector<double>& t_grid);

// Quotient quantities against h at fixed dt; expected order 1.
std::pair<OrderReport, OrderReport> quotient_h_sweep(const std::vector<TriMesh>& family,
                                                     const SurfaceMotion& motion,
                                                     const SphereSurface& sphere, double dt,
                                                     double t_end);

// Quotient quantities against dt at fixed mesh; expected order 1.
std::pair<OrderReport, OrderReport> quotient_dt_sweep(const TriMesh& mesh,
                                                      const SurfaceMotion& motion,
                                                      const SphereSurface& sphere,
                                                      const std::vector<double>& dts,
                                                      double t_end);

// Max |signed distance| over sampled points of the polyhedron; order 2.
OrderReport distance_bound(const std::vector<TriMesh>& family, const SphereSurface& sphere);

void write_order_report_csv(const OrderReport& report, const std::string& path);

// A slope window a report must land in.
struct SlopeWindow {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double s) const { return s >= lo && s <= hi; }
};

struct SuiteOutcome {
  bool pass = false;
  std::string summary;
  std::vector<OrderReport> reports;
};

// Runs one named diagnostic suite (normals | ratios | conormals | flux |
// quotients) over icosphere levels [lo, hi], checks the slope windows and
// writes per-report CSVs when out_dir is non-empty.
SuiteOutcome run_diagnostic_suite(const std::string& suite, int level_lo, int level_hi,
                                  const std::string& out_dir);

}  // namespace surffv

#endif
