#pragma once

#include "dse/knn.hpp"
#include "dse/types.hpp"

namespace dse {

struct NetworkWeights;

/// The K Euclidean nearest neighbours of a center point, sorted by distance.
struct CandidatePatch {
  Index center = -1;
  Vec3 center_position = Vec3::Zero();
  std::vector<Index> ids;
  std::vector<double> distances;
  std::vector<Vec3> offsets;  // position - center_position
};

/// The k members of a candidate patch judged geodesically closest to the
/// center. The center itself is not a member.
struct GeodesicPatch {
  Index center = -1;
  Vec3 center_position = Vec3::Zero();
  std::vector<Index> members;
  std::vector<double> distances;
  std::vector<Vec3> offsets;
  std::vector<double> scores;  // classifier scores (neural mode only)
  bool fallback = false;       // heuristic fell back to Euclidean order

  Index size() const { return static_cast<Index>(members.size()); }
};

CandidatePatch build_candidates(const PointCloud& cloud, const KnnIndex& index, Index center, int K);

/// Graph-distance selection: symmetric g-NN graph over {center} u candidates
/// with Euclidean edge weights, Dijkstra from the center, k smallest graph
/// distances (ties: Euclidean distance, then id). Falls back to the Euclidean
/// top-k (and sets `fallback`) if fewer than k candidates are reachable.
GeodesicPatch select_geodesic_heuristic(const CandidatePatch& patch, int k, int graph_degree = 8);

/// Top-k by classifier score (ties: distance, then id).
GeodesicPatch select_geodesic_neural(const CandidatePatch& patch, const NetworkWeights& classifier, int k);

/// First k candidates.
GeodesicPatch select_euclidean(const CandidatePatch& patch, int k);

}  // namespace dse
