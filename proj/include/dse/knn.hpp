#pragma once

#include "dse/types.hpp"

#include <span>

namespace dse {

struct Neighbor {
  Index id;
  double distance;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Exact k-nearest-neighbour search over a fixed set of 3D points (kd-tree).
/// Results are sorted by (distance, id), so they are identical to a brute-force
/// scan including tie order. The index is immutable and safe to query
/// concurrently.
class KnnIndex {
 public:
  KnnIndex() = default;
  explicit KnnIndex(std::vector<Vec3> points, int leaf_size = 12);

  /// K nearest points to point `query`, excluding the query itself.
  /// Throws if K > size() - 1 or query is out of range.
  std::vector<Neighbor> knn(Index query, int K) const;

  /// K nearest points to an arbitrary location (no exclusion).
  std::vector<Neighbor> nearest(const Vec3& location, int K) const;

  /// Single nearest point; the index must be non-empty.
  Neighbor nearest(const Vec3& location) const;

  Index size() const { return static_cast<Index>(points_.size()); }
  const Vec3& point(Index i) const { return points_[static_cast<std::size_t>(i)]; }

 private:
  struct Node {
    // Leaves have split_dim == -1 and cover order_[begin, end).
    int split_dim = -1;
    double split = 0.0;
    Index begin = 0, end = 0;
    Index left = -1, right = -1;
  };

  Index build(Index begin, Index end);
  std::vector<Neighbor> search(const Vec3& location, int K, Index exclude) const;

  std::vector<Vec3> points_;
  std::vector<Index> order_;
  std::vector<Node> nodes_;
  int leaf_size_ = 12;
};

}  // namespace dse
