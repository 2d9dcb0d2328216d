#pragma once

#include "dse/mesh.hpp"
#include "dse/types.hpp"

#include <limits>

namespace dse {

/// Edge-manifold, consistently oriented reference mesh with a geodesic graph:
/// mesh edges plus, for every interior edge, the segment joining the two
/// opposite vertices when the hinge unfolds to a convex quad (its length is
/// the unfolded length).
class ReferenceSurface {
 public:
  explicit ReferenceSurface(TriangleMesh mesh);

  struct Arc {
    Index to;
    double length;
  };

  const TriangleMesh& mesh() const { return mesh_; }
  const std::vector<Arc>& arcs(Index v) const { return graph_[static_cast<std::size_t>(v)]; }
  const Vec3& normal(Index v) const { return normals_[static_cast<std::size_t>(v)]; }
  const Vec3& position(Index v) const { return mesh_.vertices[static_cast<std::size_t>(v)]; }
  Index size() const { return mesh_.vertex_count(); }

  /// Ring neighbours of `v` in counter-clockwise fan order (about the outward
  /// normal) and whether the fan is closed.
  struct Fan {
    std::vector<Index> ring;
    bool closed = false;
  };
  const Fan& fan(Index v) const { return fans_[static_cast<std::size_t>(v)]; }

 private:
  TriangleMesh mesh_;
  std::vector<std::vector<Arc>> graph_;
  std::vector<Vec3> normals_;
  std::vector<Fan> fans_;
};

/// Vertices settled by Dijkstra from `source`, ascending distance.
struct GeodesicDistances {
  std::vector<Index> ids;
  std::vector<double> distances;
  std::vector<Index> parents;  // -1 for the source
  bool exhausted = false;      // the source component ran out before the cutoff
};

/// Shortest-path distances over the geodesic graph, limited to `cutoff` and
/// (optionally) to the first `max_settled` vertices.
GeodesicDistances graph_geodesic_distances(const ReferenceSurface& surface, Index source,
                                           double cutoff = std::numeric_limits<double>::infinity(),
                                           std::size_t max_settled = std::numeric_limits<std::size_t>::max());

struct GroundTruthLogMap {
  Index center = -1;
  std::vector<Index> ids;          // neighbours, ascending graph distance
  std::vector<double> distances;   // graph geodesic distance
  std::vector<Vec2> coords;        // log map coordinates, center at origin
};

/// Discrete log map over the shortest-path tree: the first step from the
/// center uses polar angles from the center's fan (interior fans scaled to
/// total 2*pi); every later step adds the edge length along the tangent
/// direction of the edge in a frame transported from the parent vertex.
/// Coordinates are defined up to a global rotation of the patch.
GroundTruthLogMap logmap_field(const ReferenceSurface& surface, Index center,
                               double cutoff = std::numeric_limits<double>::infinity(),
                               std::size_t max_settled = std::numeric_limits<std::size_t>::max());

/// The k graph-nearest vertices with their log map coordinates. Throws if
/// fewer than k vertices are reachable.
GroundTruthLogMap gt_logmap(const ReferenceSurface& surface, Index center, int k);

/// Closed-form log maps on canonical surfaces.
struct AnalyticSurface {
  enum class Kind { plane, sphere, cylinder };
  Kind kind = Kind::plane;
  Vec3 origin = Vec3::Zero();          // point on the plane / sphere center / point on the cylinder axis
  Vec3 axis = Vec3::UnitZ();           // plane normal / cylinder axis
  double radius = 1.0;

  static AnalyticSurface plane(const Vec3& point = Vec3::Zero(), const Vec3& normal = Vec3::UnitZ());
  static AnalyticSurface sphere(const Vec3& center = Vec3::Zero(), double radius = 1.0);
  /// Cylinder about the z axis through `axis_point`.
  static AnalyticSurface cylinder(double radius, const Vec3& axis_point = Vec3::Zero());

  Vec3 normal_at(const Vec3& p) const;
  bool contains(const Vec3& p, double tolerance = 1e-9) const;
};

/// Log map coordinates of `neighbor` about `center`, in the frame
/// tangent_basis(normal_at(center)) (cylinder: circumferential then axial).
/// Throws if either point is off the surface or `neighbor` is on the cut
/// locus (antipode on the sphere).
Vec2 analytic_logmap(const AnalyticSurface& shape, const Vec3& center, const Vec3& neighbor);

}  // namespace dse
