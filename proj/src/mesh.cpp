#include "surffv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <string>

namespace surffv {

namespace {

using Tri = std::array<int, 3>;

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

// Flips triangles so that every shared edge is traversed in opposite
// directions by its two cells (single BFS sweep from cell 0), then flips the
// whole mesh if the enclosed signed volume is negative, which fixes the
// global orientation to outward for closed surfaces.
void orient_consistently(const std::vector<Vec3>& vertices, std::vector<Tri>& tris) {
  std::map<std::uint64_t, std::vector<int>> incident;
  for (int c = 0; c < static_cast<int>(tris.size()); ++c) {
    for (int i = 0; i < 3; ++i) {
      incident[edge_key(tris[c][i], tris[c][(i + 1) % 3])].push_back(c);
    }
  }
  for (const auto& [key, cells] : incident) {
    if (cells.size() != 2) {
      throw GeometryError("mesh is not a closed surface: edge with " +
                          std::to_string(cells.size()) + " incident cells");
    }
  }

  auto directed = [&](int c, int a, int b) {
    // true if cell c traverses a -> b
    for (int i = 0; i < 3; ++i) {
      if (tris[c][i] == a && tris[c][(i + 1) % 3] == b) return true;
    }
    return false;
  };

  std::vector<char> visited(tris.size(), 0);
  std::queue<int> frontier;
  frontier.push(0);
  visited[0] = 1;
  while (!frontier.empty()) {
    const int c = frontier.front();
    frontier.pop();
    for (int i = 0; i < 3; ++i) {
      const int a = tris[c][i];
      const int b = tris[c][(i + 1) % 3];
      const auto& cells = incident[edge_key(a, b)];
      const int other = cells[0] == c ? cells[1] : cells[0];
      if (visited[other]) continue;
      if (directed(other, a, b)) std::swap(tris[other][1], tris[other][2]);
      visited[other] = 1;
      frontier.push(other);
    }
  }
  if (std::find(visited.begin(), visited.end(), 0) != visited.end()) {
    throw GeometryError("mesh is not edge-connected");
  }

  double volume6 = 0.0;
  for (const auto& t : tris) {
    volume6 += vertices[t[0]].dot(vertices[t[1]].cross(vertices[t[2]]));
  }
  if (volume6 < 0.0) {
    for (auto& t : tris) std::swap(t[1], t[2]);
  }
}

}  // namespace

TriMesh::TriMesh(std::vector<Vec3> vertices, std::vector<Tri> triangles, int level)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), level_(level) {
  if (triangles_.empty()) throw ParameterError("mesh needs at least one triangle");
  orient_consistently(vertices_, triangles_);

  std::map<std::uint64_t, int> index;
  cell_edges_.assign(triangles_.size(), {-1, -1, -1});
  for (int c = 0; c < num_cells(); ++c) {
    for (int i = 0; i < 3; ++i) {
      const int a = triangles_[c][i];
      const int b = triangles_[c][(i + 1) % 3];
      const auto key = edge_key(a, b);
      auto it = index.find(key);
      if (it == index.end()) {
        Edge e;
        e.v0 = std::min(a, b);
        e.v1 = std::max(a, b);
        it = index.emplace(key, static_cast<int>(edges_.size())).first;
        edges_.push_back(e);
      }
      Edge& e = edges_[it->second];
      if (a == e.v0) {
        e.left = c;  // traverses v0 -> v1
      } else {
        e.right = c;
      }
      auto& ce = cell_edges_[c];
      *std::find(ce.begin(), ce.end(), -1) = it->second;
    }
  }
  for (const Edge& e : edges_) {
    if (e.left < 0 || e.right < 0) {
      throw GeometryError("inconsistent orientation: edge traversed twice in the same direction");
    }
  }
}

TriMesh build_icosphere(int level) {
  if (level < 0) throw ParameterError("icosphere level must be non-negative");
  if (level > 9) {
    throw CapacityError("icosphere level " + std::to_string(level) + " exceeds the supported maximum of 9");
  }
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {
      {-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> t = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  TriMesh mesh(std::move(v), std::move(t), 0);
  const auto project = sphere_projection(1.0);
  for (int l = 0; l < level; ++l) mesh = refine(mesh, project);
  return mesh;
}

TriMesh refine(const TriMesh& mesh, const VertexProjection& project) {
  std::vector<Vec3> vertices = mesh.vertices();
  std::map<std::uint64_t, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = edge_key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec3 m = 0.5 * (vertices[a] + vertices[b]);
    if (project) m = project(m);
    const int idx = static_cast<int>(vertices.size());
    vertices.push_back(m);
    midpoint.emplace(key, idx);
    return idx;
  };

  std::vector<std::array<int, 3>> tris;
  tris.reserve(mesh.triangles().size() * 4);
  for (const auto& t : mesh.triangles()) {
    const int ab = mid(t[0], t[1]);
    const int bc = mid(t[1], t[2]);
    const int ca = mid(t[2], t[0]);
    tris.push_back({t[0], ab, ca});
    tris.push_back({ab, t[1], bc});
    tris.push_back({ca, bc, t[2]});
    tris.push_back({ab, bc, ca});
  }
  return TriMesh(std::move(vertices), std::move(tris), mesh.level() + 1);
}

TriMesh build_torus(double major_radius, double minor_radius, std::pair<int, int> resolution) {
  if (!(minor_radius > 0.0) || !(major_radius > minor_radius)) {
    throw ParameterError("torus radii must satisfy 0 < minor < major");
  }
  const int nu = resolution.first;
  const int nv = resolution.second;
  if (nu < 4 || nv < 4) throw ParameterError("torus resolution must be at least 4 in each direction");

  const double two_pi = 2.0 * M_PI;
  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(nu) * nv);
  for (int i = 0; i < nu; ++i) {
    const double u = two_pi * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double v = two_pi * j / nv;
      const double ring = major_radius + minor_radius * std::cos(v);
      vertices.emplace_back(ring * std::cos(u), ring * std::sin(u), minor_radius * std::sin(v));
    }
  }
  auto id = [&](int i, int j) { return (i % nu) * nv + (j % nv); };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<std::size_t>(nu) * nv * 2);
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      tris.push_back({a, b, c});
      tris.push_back({a, c, d});
    }
  }
  return TriMesh(std::move(vertices), std::move(tris), 0);
}

VertexProjection sphere_projection(double radius) {
  return [radius](const Vec3& x) { return Vec3(radius * x.normalized()); };
}

MeshQuality mesh_quality(const TriMesh& mesh, const Positions& positions) {
  if (positions.size() != mesh.vertices().size()) {
    throw ParameterError("positions do not match mesh vertex count");
  }
  MeshQuality q;
  q.alpha = std::numeric_limits<double>::infinity();
  q.per_cell_diameters.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.triangles()[c];
    const Vec3& p0 = positions[t[0]];
    const Vec3& p1 = positions[t[1]];
    const Vec3& p2 = positions[t[2]];
    const double l0 = (p1 - p0).norm();
    const double l1 = (p2 - p1).norm();
    const double l2 = (p0 - p2).norm();
    const double diam = std::max({l0, l1, l2});
    const double perim = l0 + l1 + l2;
    const double area = 0.5 * (p1 - p0).cross(p2 - p0).norm();
    if (!(area > 0.0)) {
      throw GeometryError("degenerate cell " + std::to_string(c) + " has zero area");
    }
    q.per_cell_diameters[c] = diam;
    q.h = std::max(q.h, diam);
    q.alpha = std::min(q.alpha, std::min(area / (diam * diam), diam / perim));
  }
  return q;
}

}  // namespace surffv
