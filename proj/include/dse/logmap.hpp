#pragma once

#include "dse/neighborhood.hpp"
#include "dse/types.hpp"

#include <optional>
#include <string_view>

namespace dse {

enum class Estimator { projection, rotation, neural };

std::string_view to_string(Estimator e);
Estimator parse_estimator(std::string_view name);

/// 2D embedding of a patch with the center at the origin. `coords[j]` is the
/// image of `members[j]`; the center is implicit at (0, 0).
struct LogMap2D {
  Index center = -1;
  std::vector<Index> members;
  std::vector<Vec2> coords;
  Estimator estimator = Estimator::projection;
  std::size_t degenerate = 0;  // members whose angle was forced by a tie rule

  Index size() const { return static_cast<Index>(members.size()); }
};

/// Orthogonal projection onto the tangent plane of the PCA normal of
/// center + members (or of `normal` when given, e.g. a reference normal).
LogMap2D estimate_projection(const GeodesicPatch& patch, std::optional<Vec3> normal = std::nullopt);

/// Rotates each member about the center into the tangent plane: keeps the
/// Euclidean center distance, takes the angle of the tangent projection.
/// Members on the normal line get angle 0 and are counted in `degenerate`.
LogMap2D estimate_rotation(const GeodesicPatch& patch, std::optional<Vec3> normal = std::nullopt);

/// Projector network output in model units, translated so the center's
/// predicted coordinate is the origin.
LogMap2D estimate_neural(const GeodesicPatch& patch, const NetworkWeights& projector);

}  // namespace dse
