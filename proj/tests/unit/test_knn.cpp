#include "dse/knn.hpp"
#include "naive.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace dse;

TEST_CASE("knn equals brute force on random clouds") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> size(121, 2000);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Vec3> pts(static_cast<std::size_t>(size(rng)));
    for (auto& p : pts) p = Vec3(u(rng), u(rng), 0.2 * u(rng));
    const KnnIndex index(pts);
    for (int K : {1, 30, 120}) {
      for (int q = 0; q < 10; ++q) {
        const Index c = static_cast<Index>(rng() % pts.size());
        CHECK(index.knn(c, K) == oracle::brute_knn(pts, pts[c], K, c));
      }
    }
  }
}

TEST_CASE("knn ties are broken by id, exactly like a sorted brute force") {
  std::vector<Vec3> pts;
  for (int z = 0; z < 5; ++z)
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 5; ++x) pts.emplace_back(x, y, z);
  const KnnIndex index(pts, 4);
  for (Index c = 0; c < static_cast<Index>(pts.size()); ++c)
    for (int K : {1, 6, 18, 26}) CHECK(index.knn(c, K) == oracle::brute_knn(pts, pts[c], K, c));
}

TEST_CASE("grid point: K = 8 returns the ring neighbours") {
  std::vector<Vec3> pts;
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) pts.emplace_back(x, y, 0);
  const KnnIndex index(pts);
  const auto nb = index.knn(12, 8);
  std::vector<Index> ids;
  for (const auto& n : nb) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());
  CHECK(ids == std::vector<Index>{6, 7, 8, 11, 13, 16, 17, 18});
}

TEST_CASE("nearest to an arbitrary location and error cases") {
  const std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}, {0, 2, 0}};
  const KnnIndex index(pts);
  CHECK(index.nearest(Vec3(0.9, 0.1, 0)).id == 1);
  CHECK(index.nearest(Vec3(0, 0, 0), 3).size() == 3);
  CHECK_THROWS_AS(index.knn(0, 3), Error);
  CHECK_THROWS_AS(index.knn(5, 1), Error);
}
