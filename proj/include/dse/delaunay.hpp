#pragma once

#include "dse/types.hpp"

#include <span>

namespace dse {

/// 2D Delaunay triangulation. Triangles index `points` and are strictly
/// counter-clockwise. Points merged as duplicates map to their representative
/// in `representative` and belong to no triangle.
struct Triangulation2D {
  std::vector<Vec2> points;
  std::vector<Triangle> triangles;
  std::vector<bool> on_hull;
  std::vector<Index> representative;
};

/// Incremental lexicographic construction followed by Lawson flips, using exact
/// orientation and in-circle predicates. Co-circular ties are broken by
/// symbolic perturbation ordered by `ranks` (default: the point index), which
/// makes the result unique for a given rank assignment. Points within
/// `merge_tolerance` (relative to the bounding-box diagonal) are merged into
/// the lowest index. Throws if fewer than three distinct non-collinear points
/// remain.
Triangulation2D delaunay2d(std::span<const Vec2> points, std::span<const Index> ranks = {},
                           double merge_tolerance = 1e-12);

/// Umbrella of triangles around one patch center, in global point ids.
struct DelaunaySurfaceElement {
  Index center = -1;
  std::vector<Triangle> triangles;  // canonical (sorted) global ids
  std::vector<double> min_angles;   // per triangle, radians, in the 2D embedding
  bool boundary = false;            // center on the convex hull of its patch
  bool empty = false;
};

/// All triangles incident to `center`, mapped through `global_ids`.
DelaunaySurfaceElement extract_dse(const Triangulation2D& tri, Index center, std::span<const Index> global_ids);

/// Smallest interior angle of a 2D triangle, radians.
double min_angle(const Vec2& a, const Vec2& b, const Vec2& c);

/// True if the triangles around `center` can be ordered cyclically (closed
/// fan) or linearly (open fan) with consecutive triangles sharing an edge.
bool is_single_fan(std::span<const Triangle> triangles, Index center, bool closed);

}  // namespace dse
