#include "dse/mesh.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace dse {

PointCloud::PointCloud(std::vector<Vec3> pts, std::vector<Vec3> nrm)
    : positions(std::move(pts)), normals(std::move(nrm)) {
  if (!normals.empty()) {
    if (normals.size() != positions.size()) throw Error("PointCloud: normal count differs from point count");
    for (const auto& n : normals)
      if (std::abs(n.norm() - 1.0) > 1e-6) throw Error("PointCloud: normals must be unit length");
  }
}

Triangle canonical_triangle(Index a, Index b, Index c) {
  if (a == b || b == c || a == c) throw Error("canonical_triangle: repeated vertex index");
  Triangle t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

std::size_t EdgeAdjacency::incidence_total() const {
  std::size_t total = 0;
  for (const auto& [e, tris] : incidence) total += tris.size();
  return total;
}

std::size_t EdgeAdjacency::max_incidence() const {
  std::size_t m = 0;
  for (const auto& [e, tris] : incidence) m = std::max(m, tris.size());
  return m;
}

std::size_t EdgeAdjacency::count_with_incidence(std::size_t n) const {
  return static_cast<std::size_t>(
      std::count_if(incidence.begin(), incidence.end(), [n](const auto& kv) { return kv.second.size() == n; }));
}

EdgeAdjacency build_edge_adjacency(const std::vector<Triangle>& triangles) {
  EdgeAdjacency adj;
  for (Index t = 0; t < static_cast<Index>(triangles.size()); ++t) {
    const auto& tri = triangles[t];
    for (int i = 0; i < 3; ++i) adj.incidence[make_edge(tri[i], tri[(i + 1) % 3])].push_back(t);
  }
  return adj;
}

void validate_mesh(const TriangleMesh& mesh) {
  if (mesh.vertex_ids.size() != mesh.vertices.size()) throw Error("mesh: vertex_ids size mismatch");
  std::set<Triangle> seen;
  for (const auto& t : mesh.triangles) {
    for (Index v : t)
      if (v < 0 || v >= mesh.vertex_count()) throw Error("mesh: triangle index out of range");
    if (!seen.insert(canonical_triangle(t)).second) throw Error("mesh: duplicate triangle");
  }
}

TriangleMesh make_mesh(std::vector<Vec3> positions, std::vector<Triangle> triangles) {
  TriangleMesh mesh;
  mesh.vertex_ids.resize(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) mesh.vertex_ids[i] = static_cast<Index>(i);
  mesh.vertices = std::move(positions);
  mesh.triangles = std::move(triangles);
  validate_mesh(mesh);
  return mesh;
}

TriangleMesh compact_mesh(const TriangleMesh& mesh) {
  std::vector<Index> remap(mesh.vertices.size(), -1);
  for (const auto& t : mesh.triangles)
    for (Index v : t) remap[v] = 0;
  TriangleMesh out;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (remap[v] < 0) continue;
    remap[v] = static_cast<Index>(out.vertices.size());
    out.vertices.push_back(mesh.vertices[v]);
    out.vertex_ids.push_back(mesh.vertex_ids[v]);
  }
  out.triangles.reserve(mesh.triangles.size());
  for (const auto& t : mesh.triangles) out.triangles.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
  return out;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) { return 0.5 * (b - a).cross(c - a).norm(); }

double mesh_area(const TriangleMesh& mesh) {
  double area = 0.0;
  for (const auto& t : mesh.triangles) area += triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
  return area;
}

std::vector<Vec3> vertex_normals(const TriangleMesh& mesh) {
  std::vector<Vec3> normals(mesh.vertices.size(), Vec3::Zero());
  for (const auto& t : mesh.triangles) {
    // Unnormalized cross product is twice the area times the face normal.
    const Vec3 n = (mesh.vertices[t[1]] - mesh.vertices[t[0]]).cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]);
    for (Index v : t) normals[v] += n;
  }
  for (auto& n : normals) {
    const double len = n.norm();
    if (len > 0.0) n /= len;
  }
  return normals;
}

PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed) {
  if (n == 0) return {};
  if (mesh.triangles.empty()) throw Error("sample_surface: empty mesh");
  std::vector<double> cumulative;
  cumulative.reserve(mesh.triangles.size());
  double total = 0.0;
  for (const auto& t : mesh.triangles) {
    const double a = triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    if (!std::isfinite(a)) throw Error("sample_surface: non-finite triangle area");
    total += a;
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) throw Error("sample_surface: mesh has zero total area");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec3> points, normals;
  points.reserve(n);
  normals.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pick = unit(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    if (it == cumulative.end()) --it;
    const auto& t = mesh.triangles[static_cast<std::size_t>(it - cumulative.begin())];
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    const double s = std::sqrt(unit(rng));
    const double r = unit(rng);
    points.push_back((1.0 - s) * a + s * (1.0 - r) * b + s * r * c);
    normals.push_back((b - a).cross(c - a).normalized());
  }
  return PointCloud(std::move(points), std::move(normals));
}

}  // namespace dse
