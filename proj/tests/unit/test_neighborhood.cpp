#include "dse/knn.hpp"
#include "dse/neighborhood.hpp"
#include "dse/network.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace dse;

namespace {

PointCloud grid_cloud(int n, double spacing) {
  std::vector<Vec3> pts;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) pts.emplace_back(x * spacing, y * spacing, 0.0);
  return PointCloud(pts);
}

// Classifier whose logit is minus the normalized center distance.
NetworkWeights distance_classifier() {
  NetworkWeights net = NetworkWeights::zeros(NetworkKind::classifier, {{LayerKind::linear, 4, 1},
                                                                      {LayerKind::global_maxpool, 1, 1},
                                                                      {LayerKind::concat_global, 1, 5},
                                                                      {LayerKind::linear, 5, 1}});
  net.weights[1](0, 3) = -1.0;
  return net;
}

}  // namespace

TEST_CASE("candidates: ring neighbours on a grid, sorted, with consistent offsets") {
  const PointCloud cloud = grid_cloud(7, 1.0);
  const KnnIndex index(cloud.positions);
  const auto cand = build_candidates(cloud, index, 24, 8);
  REQUIRE(cand.ids.size() == 8);
  CHECK(std::is_sorted(cand.distances.begin(), cand.distances.end()));
  for (std::size_t j = 0; j < cand.ids.size(); ++j) {
    CHECK(cand.distances[j] <= std::sqrt(2.0) + 1e-12);
    CHECK(cand.offsets[j].norm() == doctest::Approx(cand.distances[j]).epsilon(1e-12));
    CHECK((cloud.positions[cand.ids[j]] - cand.center_position - cand.offsets[j]).norm() < 1e-12);
  }
  CHECK_THROWS_AS(build_candidates(cloud, index, 0, 49), Error);
}

TEST_CASE("heuristic on a flat grid equals Euclidean top-k") {
  // Within a distance shell the two orders may differ by rounding, so k is
  // placed between shells. Up to the default k the 8-NN graph metric orders
  // grid shells like the Euclidean one.
  const PointCloud cloud = grid_cloud(15, 0.1);
  const KnnIndex index(cloud.positions);
  int compared = 0;
  for (Index c : {0, 7, 112, 200}) {
    const auto cand = build_candidates(cloud, index, c, 60);
    for (int k = 4; k <= 30; ++k) {
      if (cand.distances[k] - cand.distances[k - 1] < 1e-9) continue;
      const auto geo = select_geodesic_heuristic(cand, k);
      CHECK_FALSE(geo.fallback);
      auto a = geo.members, b = select_euclidean(cand, k).members;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      CHECK(a == b);
      ++compared;
    }
  }
  CHECK(compared > 20);
}

TEST_CASE("farther out the grid graph metric departs from Euclidean order") {
  // From a corner, (3,3) is 3*sqrt(2) away along diagonals but (4,1) needs
  // 3 + sqrt(2), although (4,1) is Euclidean-closer.
  const PointCloud cloud = grid_cloud(15, 1.0);
  const KnnIndex index(cloud.positions);
  const auto cand = build_candidates(cloud, index, 0, 60);
  auto a = select_geodesic_heuristic(cand, 32).members, b = select_euclidean(cand, 32).members;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a != b);
}

TEST_CASE("heuristic stays on the center's sheet of two parallel planes") {
  std::vector<Vec3> pts;
  for (int sheet = 0; sheet < 2; ++sheet)
    for (int y = 0; y < 12; ++y)
      for (int x = 0; x < 12; ++x) pts.emplace_back(x * 0.02, y * 0.02, sheet * 0.05);
  const PointCloud cloud(pts);
  const KnnIndex index(cloud.positions);
  const Index center = 6 * 12 + 6;
  const auto cand = build_candidates(cloud, index, center, 120);
  bool spans_both = false;
  for (Index id : cand.ids) spans_both = spans_both || id >= 144;
  REQUIRE(spans_both);
  const auto geo = select_geodesic_heuristic(cand, 30, 8);
  for (Index id : geo.members) CHECK(id < 144);
  // The Euclidean choice does cross the gap for a large enough k.
  const auto euc = select_euclidean(cand, 100);
  CHECK(std::any_of(euc.members.begin(), euc.members.end(), [](Index id) { return id >= 144; }));
}

TEST_CASE("k = K selects every candidate; invalid k is rejected") {
  const PointCloud cloud = grid_cloud(6, 1.0);
  const KnnIndex index(cloud.positions);
  const auto cand = build_candidates(cloud, index, 14, 20);
  const auto all = select_geodesic_heuristic(cand, 20);
  auto a = all.members, b = cand.ids;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  CHECK_THROWS_AS(select_geodesic_heuristic(cand, 0), Error);
  CHECK_THROWS_AS(select_geodesic_heuristic(cand, 21), Error);
  CHECK_THROWS_AS(select_geodesic_neural(cand, distance_classifier(), 0), Error);
}

TEST_CASE("heuristic falls back to Euclidean order when the graph is disconnected") {
  std::vector<Vec3> pts{{0, 0, 0}};
  for (int i = 0; i < 4; ++i) pts.emplace_back(0.01 * (i + 1), 0, 0);
  for (int i = 0; i < 10; ++i) pts.emplace_back(5.0 + 0.01 * i, 0, 0);
  const PointCloud cloud(pts);
  const KnnIndex index(cloud.positions);
  const auto cand = build_candidates(cloud, index, 0, 14);
  const auto geo = select_geodesic_heuristic(cand, 8, 3);
  CHECK(geo.fallback);
  CHECK(geo.members == select_euclidean(cand, 8).members);
}

TEST_CASE("neural selection with a distance-monotone classifier equals Euclidean top-k") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> pts(400);
  for (auto& p : pts) p = Vec3(u(rng), u(rng), 0.1 * u(rng));
  const PointCloud cloud(pts);
  const KnnIndex index(cloud.positions);
  const auto net = distance_classifier();
  for (Index c : {0, 10, 200}) {
    const auto cand = build_candidates(cloud, index, c, 120);
    const auto nn = select_geodesic_neural(cand, net, 30);
    CHECK(nn.members == select_euclidean(cand, 30).members);
    REQUIRE(nn.scores.size() == 30);
    CHECK(std::is_sorted(nn.scores.rbegin(), nn.scores.rend()));
  }
}

TEST_CASE("neural selection rejects projector weights") {
  const PointCloud cloud = grid_cloud(6, 1.0);
  const KnnIndex index(cloud.positions);
  const auto cand = build_candidates(cloud, index, 14, 20);
  const auto projector = NetworkWeights::zeros(NetworkKind::projector, {{LayerKind::linear, 4, 2},
                                                                        {LayerKind::global_maxpool, 2, 2},
                                                                        {LayerKind::concat_global, 2, 6},
                                                                        {LayerKind::linear, 6, 2}});
  CHECK_THROWS_AS(select_geodesic_neural(cand, projector, 5), Error);
}
