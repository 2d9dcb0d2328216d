#pragma once

#include "dse/delaunay.hpp"
#include "dse/types.hpp"

#include <map>
#include <span>

namespace dse {

struct CandidateTriangle {
  int count = 0;          // distinct proposing DSEs, 1..3
  double quality = 0.0;   // mean min angle (radians) over proposers
};

/// Canonical triangle -> vote count and quality.
using CandidateTable = std::map<Triangle, CandidateTriangle>;

/// Votes of all DSEs. A DSE contributes to a triangle only if its center is one
/// of the triangle's vertices, and at most once.
CandidateTable count_memberships(std::span<const DelaunaySurfaceElement> dses);

/// Candidates in insertion priority: count descending, quality descending,
/// canonical triple ascending.
std::vector<Triangle> priority_order(const CandidateTable& table);

/// Greedy manifold-preserving insertion in priority order: a triangle is kept
/// iff each of its edges has fewer than two kept triangles. Returns canonical
/// triples in insertion order.
std::vector<Triangle> greedy_select(const CandidateTable& table);

/// Consistent winding by breadth-first propagation across edges shared by
/// exactly two triangles. Each connected component is then flipped as a whole
/// to agree with `normals` by majority (when given), or else to have positive
/// signed volume about its centroid.
std::vector<Triangle> orient_triangles(std::span<const Triangle> triangles, std::span<const Vec3> positions,
                                       std::span<const Vec3> normals = {});

}  // namespace dse
