#pragma once

#include "dse/types.hpp"

#include <span>

namespace dse {

inline constexpr int kNoise = -1;

/// Density clustering. A point is core if at least `min_pts` points (itself
/// included) lie within distance `eps`. Clusters are grown breadth-first from
/// the first unlabelled core point in index order, so labels are deterministic;
/// border points go to the first cluster that reaches them. Noise is kNoise.
std::vector<int> dbscan(std::span<const Vec2> points, double eps, int min_pts);

}  // namespace dse
