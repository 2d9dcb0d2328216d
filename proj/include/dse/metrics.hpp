#pragma once

#include "dse/geodesic.hpp"
#include "dse/logmap.hpp"
#include "dse/types.hpp"

#include <array>
#include <optional>
#include <span>

namespace dse {

/// Percentage of edges with exactly one incident triangle. Empty mesh: 0.
double nonwatertight_ratio(const TriangleMesh& mesh);

/// Mean nearest-neighbour distance from a to b plus the same from b to a,
/// each normalized by its own set size.
double chamfer(std::span<const Vec3> a, std::span<const Vec3> b);
inline double chamfer(const PointCloud& a, const PointCloud& b) { return chamfer(a.positions, b.positions); }

struct NormalError {
  double mean_deg = 0.0;
  std::size_t evaluated = 0;
  std::size_t excluded = 0;  // vertices without an incident triangle
};

/// Unsigned angle between area-weighted vertex normals and `reference`
/// (one per mesh vertex), averaged over vertices.
NormalError normal_error(const TriangleMesh& mesh, std::span<const Vec3> reference);

struct AngleStats {
  double mean_deg = 0.0;
  double stddev_deg = 0.0;  // population
  std::array<std::size_t, 180> histogram{};
  std::size_t degenerate = 0;
};

AngleStats angle_stats(const TriangleMesh& mesh);

/// Interior angles of a triangle in degrees. Zero-area triangles yield
/// {0, 0, 180} with the 180 at the vertex between the other two.
std::array<double, 3> triangle_angles_deg(const Vec3& a, const Vec3& b, const Vec3& c, bool* degenerate = nullptr);

struct LogMapError {
  double geodesic_mse = 0.0;
  double position_mse = 0.0;
};

/// Errors of an estimated log map against ground truth over the same member
/// ids (any order). Positions are compared after the best rigid alignment,
/// reflections allowed.
LogMapError logmap_mse(const LogMap2D& estimated, const GroundTruthLogMap& gt);

struct MeshReport {
  double nw_percent = 0.0;
  std::optional<double> chamfer;
  std::optional<double> normal_error_deg;
  double angle_stddev_deg = 0.0;
  std::array<std::size_t, 180> angle_histogram{};
  std::size_t vertices = 0;
  std::size_t triangles = 0;
  std::size_t edges = 0;
  std::size_t nonmanifold_edges = 0;
  std::size_t normal_excluded = 0;
  std::size_t degenerate_triangles = 0;
  std::size_t chamfer_samples = 0;
};

/// NW and angle statistics; no reference needed.
MeshReport intrinsic_report(const TriangleMesh& mesh);

/// Full report against a reference mesh. Chamfer uses `samples` area-uniform
/// samples on each surface; normal error uses the closest reference sample's
/// normal for each mesh vertex.
MeshReport evaluate(const TriangleMesh& mesh, const TriangleMesh& reference, std::size_t samples = 100000,
                    std::uint64_t seed = 1);

}  // namespace dse
