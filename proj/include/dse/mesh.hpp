#pragma once

#include "dse/types.hpp"

#include <cstdint>
#include <map>
#include <utility>

namespace dse {

/// Sorted copy of (a, b, c). Throws on a repeated index.
Triangle canonical_triangle(Index a, Index b, Index c);
inline Triangle canonical_triangle(const Triangle& t) { return canonical_triangle(t[0], t[1], t[2]); }

using Edge = std::pair<Index, Index>;

inline Edge make_edge(Index a, Index b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Unordered vertex pair -> incident triangle indices (ascending).
struct EdgeAdjacency {
  std::map<Edge, std::vector<Index>> incidence;

  std::size_t edge_count() const { return incidence.size(); }
  std::size_t incidence_total() const;
  std::size_t max_incidence() const;
  std::size_t count_with_incidence(std::size_t n) const;
};

EdgeAdjacency build_edge_adjacency(const std::vector<Triangle>& triangles);
inline EdgeAdjacency build_edge_adjacency(const TriangleMesh& mesh) { return build_edge_adjacency(mesh.triangles); }

/// Checks range, distinctness and absence of duplicate canonical triangles.
void validate_mesh(const TriangleMesh& mesh);

/// Mesh over `positions` with identity vertex ids.
TriangleMesh make_mesh(std::vector<Vec3> positions, std::vector<Triangle> triangles);

/// Keeps only vertices referenced by a triangle. `vertex_ids` keep pointing at
/// the original cloud.
TriangleMesh compact_mesh(const TriangleMesh& mesh);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
double mesh_area(const TriangleMesh& mesh);

/// Area-weighted incident face normals; zero vector for isolated vertices.
std::vector<Vec3> vertex_normals(const TriangleMesh& mesh);

/// Area-proportional triangle choice, uniform barycentric placement.
/// Deterministic in `seed`. Throws if the mesh has no positive-area triangle
/// (unless n == 0).
PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed);

}  // namespace dse
