#include "surffv/sphere.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

namespace surffv {

namespace {

constexpr int kMaxSubdivisionDepth = 12;

double arc_angle(const Vec3& p, const Vec3& q) {
  return std::atan2(p.cross(q).norm(), p.dot(q));
}

std::vector<std::pair<double, double>> gauss_legendre(int n) {
  // Nodes and weights on [-1,1] by Newton iteration on P_n.
  std::vector<std::pair<double, double>> rule(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[i] = {x, w};
    rule[n - 1 - i] = {-x, w};
  }
  return rule;
}

// Adaptive four-way subdivision shared by the curved and flat cell means.
// Elem must provide area(), sample() and split().
template <typename Elem>
double adaptive_mean(const std::function<double(const Vec3&)>& u0, const Elem& root,
                     double tol) {
  struct Node {
    Elem elem;
    double contrib;
  };
  const double root_area = root.area();
  if (!(root_area > 0.0)) throw GeometryError("adaptive mean over degenerate element");

  double lo = u0(root.sample());
  double hi = lo;
  auto contribution = [&](const Elem& e) {
    const double v = u0(e.sample());
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    return v * e.area();
  };

  std::vector<Node> active{{root, contribution(root)}};
  double frozen = 0.0;
  double estimate = active.front().contrib;
  for (int depth = 1; depth <= kMaxSubdivisionDepth; ++depth) {
    std::vector<Node> next;
    next.reserve(active.size() * 4);
    for (const Node& node : active) {
      const auto children = node.elem.split();
      std::array<double, 4> c{};
      double sum = 0.0;
      for (int i = 0; i < 4; ++i) {
        c[i] = contribution(children[i]);
        sum += c[i];
      }
      // Subtrees that no longer move the estimate are not refined further;
      // the bound keeps their total influence below a fraction of tol.
      if (std::abs(sum - node.contrib) <= 1e-3 * tol * node.elem.area()) {
        frozen += sum;
      } else {
        for (int i = 0; i < 4; ++i) next.push_back({children[i], c[i]});
      }
    }
    double next_estimate = frozen;
    for (const Node& node : next) next_estimate += node.contrib;
    const bool converged = std::abs(next_estimate - estimate) < tol * root_area;
    estimate = next_estimate;
    active = std::move(next);
    if (converged || active.empty()) {
      if (lo == hi) return lo;  // constant samples: the mean is that value
      return estimate / root_area;
    }
  }
  throw ToleranceError("cell mean did not converge to tolerance within depth " +
                       std::to_string(kMaxSubdivisionDepth));
}

struct SphericalElem {
  Vec3 a, b, c;  // unit vertices
  double R;
  double area() const { return spherical_triangle_area(a, b, c, R); }
  Vec3 sample() const { return R * (a + b + c).normalized(); }
  std::array<SphericalElem, 4> split() const {
    const Vec3 ab = (a + b).normalized();
    const Vec3 bc = (b + c).normalized();
    const Vec3 ca = (c + a).normalized();
    return {SphericalElem{a, ab, ca, R}, SphericalElem{ab, b, bc, R},
            SphericalElem{ca, bc, c, R}, SphericalElem{ab, bc, ca, R}};
  }
};

struct FlatElem {
  Vec3 a, b, c;
  double area() const { return 0.5 * (b - a).cross(c - a).norm(); }
  Vec3 sample() const { return (a + b + c) / 3.0; }
  std::array<FlatElem, 4> split() const {
    const Vec3 ab = 0.5 * (a + b);
    const Vec3 bc = 0.5 * (b + c);
    const Vec3 ca = 0.5 * (c + a);
    return {FlatElem{a, ab, ca}, FlatElem{ab, b, bc}, FlatElem{ca, bc, c},
            FlatElem{ab, bc, ca}};
  }
};

}  // namespace

SphereSurface SphereSurface::unit() {
  return {[](double) { return 1.0; }, Vec3::Zero()};
}

SphereSurface SphereSurface::scaled(std::function<double(double)> radius_fn) {
  return {std::move(radius_fn), Vec3::Zero()};
}

Vec3 SphereSurface::project(const Vec3& x, double t) const {
  const Vec3 d = x - center;
  const double len = d.norm();
  if (!(len > 0.0)) throw GeometryError("closest-point projection undefined at the center");
  return center + radius(t) * d / len;
}

double SphereSurface::signed_distance(const Vec3& x, double t) const {
  return (x - center).norm() - radius(t);
}

Vec3 SphereSurface::normal(const Vec3& x, double t) const {
  (void)t;
  const Vec3 d = x - center;
  const double len = d.norm();
  if (!(len > 0.0)) throw GeometryError("normal undefined at the center");
  return d / len;
}

double spherical_triangle_area(const Vec3& p0, const Vec3& p1, const Vec3& p2, double R) {
  const double a = arc_angle(p1, p2);
  const double b = arc_angle(p2, p0);
  const double c = arc_angle(p0, p1);
  const double antipodal_gap = 1e-12;
  if (a > M_PI - antipodal_gap || b > M_PI - antipodal_gap || c > M_PI - antipodal_gap) {
    throw GeometryError("spherical triangle with an antipodal vertex pair");
  }
  const double s = 0.5 * (a + b + c);
  const double prod = std::tan(0.5 * s) * std::tan(0.5 * (s - a)) *
                      std::tan(0.5 * (s - b)) * std::tan(0.5 * (s - c));
  const double excess = 4.0 * std::atan(std::sqrt(std::max(prod, 0.0)));
  return R * R * excess;
}

double arc_length(const Vec3& p, const Vec3& q, double R) {
  return R * arc_angle(p, q);
}

Vec3 curved_conormal(const Vec3& p, const Vec3& q, const Vec3& r) {
  Vec3 m = p.cross(q);
  const double len = m.norm();
  if (!(len > 1e-15)) throw GeometryError("degenerate great-circle edge");
  m /= len;
  const double side = m.dot(r);
  if (side == 0.0) throw GeometryError("cell vertex lies on the edge's great circle");
  return side > 0.0 ? Vec3(-m) : m;
}

double exact_edge_flux_average(const std::function<double(const Vec3&)>& stream_h,
                               const Vec3& p, const Vec3& q, const Vec3& mu, double R) {
  const Vec3 np = p.normalized();
  const Vec3 nq = q.normalized();
  const double len = arc_length(np, nq, R);
  if (!(len > 0.0)) throw GeometryError("zero-length arc");
  // mu x nu is the unit tangent along which the integrand is a directional
  // derivative of h; its sign at p decides the endpoint order.
  const Vec3 forward_at_p = mu.cross(np);
  const Vec3 towards_q = nq - np * np.dot(nq);
  const double oriented = forward_at_p.dot(towards_q);
  const double diff = oriented >= 0.0 ? stream_h(q) - stream_h(p) : stream_h(p) - stream_h(q);
  return diff / len;
}

double quadrature_edge_flux_average(const std::function<Vec3(const Vec3&)>& field,
                                    const Vec3& p, const Vec3& q, const Vec3& mu,
                                    double R, int points) {
  const Vec3 np = p.normalized();
  const Vec3 nq = q.normalized();
  const double theta = arc_angle(np, nq);
  if (!(theta > 0.0)) throw GeometryError("zero-length arc");
  Vec3 w = nq - np * np.dot(nq);
  w.normalize();
  double acc = 0.0;
  for (const auto& [x, weight] : gauss_legendre(points)) {
    const double ang = 0.5 * theta * (x + 1.0);
    const Vec3 point = R * (std::cos(ang) * np + std::sin(ang) * w);
    acc += weight * field(point).dot(mu);
  }
  return 0.5 * acc;  // mean: (theta/2 * acc * R) / (R * theta)
}

double curved_cell_mean(const std::function<double(const Vec3&)>& u0, const Vec3& p0,
                        const Vec3& p1, const Vec3& p2, double R, double tol) {
  return adaptive_mean(u0, SphericalElem{p0, p1, p2, R}, tol);
}

double flat_cell_mean_adaptive(const std::function<double(const Vec3&)>& u0,
                               const Vec3& p0, const Vec3& p1, const Vec3& p2,
                               double tol) {
  return adaptive_mean(u0, FlatElem{p0, p1, p2}, tol);
}

CurvedFrame curved_frame(const TriMesh& mesh, const Positions& positions,
                         const SphereSurface& sphere, double t) {
  CurvedFrame frame;
  frame.R = sphere.radius(t);
  std::vector<Vec3> unit(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Vec3 d = positions[i] - sphere.center;
    const double len = d.norm();
    if (std::abs(len - frame.R) > 1e-9 * std::max(1.0, frame.R)) {
      throw GeometryError("vertex " + std::to_string(i) + " is not on the sphere at t=" +
                          std::to_string(t));
    }
    unit[i] = d / len;
  }
  frame.cell_area.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& tri = mesh.triangles()[c];
    frame.cell_area[c] = spherical_triangle_area(unit[tri[0]], unit[tri[1]], unit[tri[2]], frame.R);
  }
  frame.edge_length.resize(mesh.num_edges());
  frame.edge_conormal.resize(mesh.num_edges());
  for (int i = 0; i < mesh.num_edges(); ++i) {
    const Edge& e = mesh.edges()[i];
    frame.edge_length[i] = arc_length(unit[e.v0], unit[e.v1], frame.R);
    const auto& tri = mesh.triangles()[e.left];
    int third = tri[0];
    for (int v : tri) {
      if (v != e.v0 && v != e.v1) third = v;
    }
    frame.edge_conormal[i] = curved_conormal(unit[e.v0], unit[e.v1], unit[third]);
  }
  return frame;
}

}  // namespace surffv
