#ifndef SURFFV_SPHERE_HPP
#define SURFFV_SPHERE_HPP

#include <functional>
#include <vector>

#include "surffv/mesh.hpp"
#include "surffv/types.hpp"

namespace surffv {

// Sphere of time-dependent radius about a fixed center: the one family of
// surfaces whose curved quantities (areas, arc lengths, conormals, edge flux
// integrals) have closed forms.
struct SphereSurface {
  std::function<double(double)> radius_fn;
  Vec3 center = Vec3::Zero();

  double radius(double t) const { return radius_fn(t); }

  static SphereSurface unit();
  static SphereSurface scaled(std::function<double(double)> radius_fn);

  // Closest-point projection onto the sphere at time t.
  Vec3 project(const Vec3& x, double t) const;
  // Signed distance, positive outside.
  double signed_distance(const Vec3& x, double t) const;
  // Outward unit normal at the projection of x.
  Vec3 normal(const Vec3& x, double t) const;
};

// Area of the spherical triangle with the given unit vertices, scaled by R^2.
// Uses l'Huilier's excess formula, which stays accurate for small triangles.
double spherical_triangle_area(const Vec3& p0, const Vec3& p1, const Vec3& p2, double R);

// Great-circle distance between unit points p and q, scaled by R.
double arc_length(const Vec3& p, const Vec3& q, double R);

// Unit conormal of the great-circle edge (p,q), constant along the arc,
// tangent to the sphere and pointing away from the cell whose remaining
// vertex is r. All arguments are unit points.
Vec3 curved_conormal(const Vec3& p, const Vec3& q, const Vec3& r);

// Mean over the arc from p to q (points on the sphere of radius R, any
// center at origin scale) of <F, mu> for the field F = nu x grad(h): the
// integral telescopes to a difference of endpoint values of the stream
// function h, divided by the arc length.
double exact_edge_flux_average(const std::function<double(const Vec3&)>& stream_h,
                               const Vec3& p, const Vec3& q, const Vec3& mu, double R);

// Mean of <F, mu> over the arc via dense Gauss quadrature; the fallback for
// fields without a stream representation and the oracle the exact path is
// tested against.
double quadrature_edge_flux_average(const std::function<Vec3(const Vec3&)>& field,
                                    const Vec3& p, const Vec3& q, const Vec3& mu,
                                    double R, int points = 64);

// Mean of u0 over the spherical triangle with unit vertices (p0,p1,p2) and
// radius R, by recursive four-way subdivision until successive estimates
// differ by less than tol. Subtrees whose refinement stops changing the
// estimate are frozen early. Throws ToleranceError beyond depth 12.
double curved_cell_mean(const std::function<double(const Vec3&)>& u0,
                        const Vec3& p0, const Vec3& p1, const Vec3& p2, double R,
                        double tol);

// Mean of u0 over a flat triangle by the same adaptive scheme; used for
// discontinuous data where fixed-order quadrature is inadequate.
double flat_cell_mean_adaptive(const std::function<double(const Vec3&)>& u0,
                               const Vec3& p0, const Vec3& p1, const Vec3& p2,
                               double tol);

// Exact curved geometry of the lifted triangulation at one instant. Vertex
// positions must lie on the sphere of radius R. `edge_conormal` belongs to
// the left cell.
struct CurvedFrame {
  std::vector<double> cell_area;
  std::vector<double> edge_length;
  std::vector<Vec3> edge_conormal;
  double R = 1.0;
};

CurvedFrame curved_frame(const TriMesh& mesh, const Positions& positions,
                         const SphereSurface& sphere, double t);

}  // namespace surffv

#endif
