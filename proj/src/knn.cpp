#include "dse/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

namespace dse {

KnnIndex::KnnIndex(std::vector<Vec3> points, int leaf_size) : points_(std::move(points)), leaf_size_(std::max(1, leaf_size)) {
  order_.resize(points_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<Index>(i);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / static_cast<std::size_t>(leaf_size_) + 1);
    build(0, static_cast<Index>(points_.size()));
  }
}

Index KnnIndex::build(Index begin, Index end) {
  const Index id = static_cast<Index>(nodes_.size());
  nodes_.push_back(Node{-1, 0.0, begin, end, -1, -1});
  if (end - begin <= leaf_size_) return id;

  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (Index i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int dim;
  const double extent = (hi - lo).maxCoeff(&dim);
  if (!(extent > 0.0)) return id;  // all coincident: keep as a leaf

  const Index mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](Index a, Index b) { return points_[a][dim] < points_[b][dim]; });
  const double split = points_[order_[mid]][dim];
  const Index left = build(begin, mid);
  const Index right = build(mid, end);
  Node& node = nodes_[id];
  node.split_dim = dim;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

std::vector<Neighbor> KnnIndex::search(const Vec3& location, int K, Index exclude) const {
  // Max-heap on (squared distance, id): the top is the current worst candidate.
  using Entry = std::pair<double, Index>;
  std::priority_queue<Entry> heap;
  const auto worst = [&]() { return heap.size() < static_cast<std::size_t>(K) ? std::numeric_limits<double>::infinity() : heap.top().first; };

  auto visit = [&](auto&& self, Index node_id) -> void {
    const Node& node = nodes_[node_id];
    if (node.split_dim < 0) {
      for (Index i = node.begin; i < node.end; ++i) {
        const Index p = order_[i];
        if (p == exclude) continue;
        const Entry e{(points_[p] - location).squaredNorm(), p};
        if (heap.size() < static_cast<std::size_t>(K)) {
          heap.push(e);
        } else if (e < heap.top()) {
          heap.pop();
          heap.push(e);
        }
      }
      return;
    }
    const double diff = location[node.split_dim] - node.split;
    const Index near = diff < 0.0 ? node.left : node.right;
    const Index far = diff < 0.0 ? node.right : node.left;
    self(self, near);
    // Points on the far side are at least |diff| away; equality may still tie.
    if (diff * diff <= worst()) self(self, far);
  };
  if (K > 0 && !nodes_.empty()) visit(visit, 0);

  std::vector<Neighbor> out(heap.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = Neighbor{heap.top().second, std::sqrt(heap.top().first)};
    heap.pop();
  }
  return out;
}

std::vector<Neighbor> KnnIndex::knn(Index query, int K) const {
  if (query < 0 || query >= size()) throw Error("knn: query id out of range");
  if (K < 0 || K > size() - 1) throw Error("knn: K must be at most N - 1");
  return search(points_[query], K, query);
}

std::vector<Neighbor> KnnIndex::nearest(const Vec3& location, int K) const {
  if (K < 0 || K > size()) throw Error("nearest: K exceeds the number of points");
  return search(location, K, -1);
}

Neighbor KnnIndex::nearest(const Vec3& location) const {
  if (points_.empty()) throw Error("nearest: empty index");
  return search(location, 1, -1).front();
}

}  // namespace dse
