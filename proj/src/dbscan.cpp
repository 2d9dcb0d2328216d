#include "dse/dbscan.hpp"

#include <deque>

namespace dse {

std::vector<int> dbscan(std::span<const Vec2> points, double eps, int min_pts) {
  if (!(eps > 0.0)) throw Error("dbscan: eps must be positive");
  if (min_pts < 1) throw Error("dbscan: min_pts must be at least 1");
  constexpr int kUnvisited = -2;
  const std::size_t n = points.size();
  const double eps2 = eps * eps;

  auto region = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j)
      if ((points[i] - points[j]).squaredNorm() <= eps2) out.push_back(j);
    return out;
  };

  std::vector<int> labels(n, kUnvisited);
  int cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != kUnvisited) continue;
    auto seeds = region(i);
    if (seeds.size() < static_cast<std::size_t>(min_pts)) {
      labels[i] = kNoise;
      continue;
    }
    labels[i] = cluster;
    std::deque<std::size_t> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
      const std::size_t q = queue.front();
      queue.pop_front();
      if (labels[q] == kNoise) labels[q] = cluster;
      if (labels[q] != kUnvisited) continue;
      labels[q] = cluster;
      auto more = region(q);
      if (more.size() >= static_cast<std::size_t>(min_pts)) queue.insert(queue.end(), more.begin(), more.end());
    }
    ++cluster;
  }
  return labels;
}

}  // namespace dse
