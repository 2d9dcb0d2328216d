#include "dse/neighborhood.hpp"

#include "dse/network.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

namespace dse {
namespace {

GeodesicPatch take(const CandidatePatch& patch, const std::vector<std::size_t>& order, int k) {
  GeodesicPatch out;
  out.center = patch.center;
  out.center_position = patch.center_position;
  for (int i = 0; i < k; ++i) {
    const std::size_t c = order[static_cast<std::size_t>(i)];
    out.members.push_back(patch.ids[c]);
    out.distances.push_back(patch.distances[c]);
    out.offsets.push_back(patch.offsets[c]);
  }
  return out;
}

void check_k(const CandidatePatch& patch, int k) {
  if (k < 1) throw Error("neighborhood: k must be positive");
  if (static_cast<std::size_t>(k) > patch.ids.size()) throw Error("neighborhood: k exceeds candidate count");
}

}  // namespace

CandidatePatch build_candidates(const PointCloud& cloud, const KnnIndex& index, Index center, int K) {
  CandidatePatch patch;
  patch.center = center;
  patch.center_position = cloud.positions.at(static_cast<std::size_t>(center));
  for (const Neighbor& n : index.knn(center, K)) {
    patch.ids.push_back(n.id);
    patch.distances.push_back(n.distance);
    patch.offsets.push_back(cloud.positions[static_cast<std::size_t>(n.id)] - patch.center_position);
  }
  return patch;
}

GeodesicPatch select_euclidean(const CandidatePatch& patch, int k) {
  check_k(patch, k);
  std::vector<std::size_t> order(patch.ids.size());
  std::iota(order.begin(), order.end(), 0);
  return take(patch, order, k);
}

GeodesicPatch select_geodesic_heuristic(const CandidatePatch& patch, int k, int graph_degree) {
  check_k(patch, k);
  if (graph_degree < 1) throw Error("select_geodesic_heuristic: graph degree must be positive");
  // Node 0 is the center, node i + 1 is candidate i.
  const std::size_t n = patch.ids.size() + 1;
  auto offset = [&](std::size_t node) { return node == 0 ? Vec3(Vec3::Zero()) : patch.offsets[node - 1]; };
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency(n);
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) dist[b] = {b == a ? std::numeric_limits<double>::infinity() : (offset(a) - offset(b)).norm(), b};
    const std::size_t g = std::min<std::size_t>(static_cast<std::size_t>(graph_degree), n - 1);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(g), dist.end());
    for (std::size_t i = 0; i < g; ++i) {
      adjacency[a].push_back({dist[i].second, dist[i].first});
      adjacency[dist[i].second].push_back({a, dist[i].first});
    }
  }

  std::vector<double> graph(n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  graph[0] = 0.0;
  heap.push({0.0, 0});
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > graph[v]) continue;
    for (const auto& [w, len] : adjacency[v])
      if (d + len < graph[w]) {
        graph[w] = d + len;
        heap.push({graph[w], w});
      }
  }

  std::vector<std::size_t> order(patch.ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t reachable = 0;
  for (std::size_t c = 0; c < order.size(); ++c)
    if (std::isfinite(graph[c + 1])) ++reachable;
  if (reachable < static_cast<std::size_t>(k)) {
    GeodesicPatch out = take(patch, order, k);
    out.fallback = true;
    return out;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (graph[a + 1] != graph[b + 1]) return graph[a + 1] < graph[b + 1];
    if (patch.distances[a] != patch.distances[b]) return patch.distances[a] < patch.distances[b];
    return patch.ids[a] < patch.ids[b];
  });
  return take(patch, order, k);
}

GeodesicPatch select_geodesic_neural(const CandidatePatch& patch, const NetworkWeights& classifier, int k) {
  check_k(patch, k);
  if (classifier.kind != NetworkKind::classifier) throw Error("select_geodesic_neural: weights are not a classifier");
  const PatchFeatures features = featurize(patch.offsets);
  const Eigen::VectorXd scores = forward_classifier(features, classifier);
  std::vector<std::size_t> order(patch.ids.size());
  std::iota(order.begin(), order.end(), 0);
  auto score = [&](std::size_t c) { return scores[static_cast<Eigen::Index>(c) + 1]; };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (score(a) != score(b)) return score(a) > score(b);
    if (patch.distances[a] != patch.distances[b]) return patch.distances[a] < patch.distances[b];
    return patch.ids[a] < patch.ids[b];
  });
  GeodesicPatch out = take(patch, order, k);
  for (int i = 0; i < k; ++i) out.scores.push_back(score(order[static_cast<std::size_t>(i)]));
  return out;
}

}  // namespace dse
