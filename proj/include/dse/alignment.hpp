#pragma once

#include "dse/kabsch.hpp"
#include "dse/logmap.hpp"

#include <optional>

namespace dse {

/// Point id -> (patch, slot) occurrences across a set of log maps. Slot -1 is
/// the patch center.
class PatchMembership {
 public:
  explicit PatchMembership(const std::vector<LogMap2D>& patches);

  struct Occurrence {
    Index patch;
    Index slot;
  };
  const std::vector<Occurrence>& occurrences(Index point) const;

  /// Image of `point` in `patch`, if the patch contains it.
  std::optional<Vec2> image(Index patch, Index point) const;

 private:
  const std::vector<LogMap2D>* patches_;
  std::vector<std::vector<Occurrence>> by_point_;
  std::vector<std::vector<std::pair<Index, Index>>> sorted_ids_;  // per patch: (point, slot) sorted
  std::vector<Occurrence> none_;
};

/// Neighbouring log map j mapped into patch i's frame.
struct AlignedNeighbor {
  Index patch = -1;
  RigidTransform2D<double> transform;
  double residual = 0.0;
  std::size_t shared = 0;
};

struct AlignmentResult {
  std::vector<AlignedNeighbor> neighbors;  // ascending patch index
  std::size_t skipped = 0;                 // neighbours sharing fewer than 3 points
};

/// Aligns every patch sharing at least three points with patch `i` onto it.
/// Reflections are used only when the best proper rotation's residual exceeds
/// twice the best reflection's residual.
AlignmentResult align_neighbors(const std::vector<LogMap2D>& patches, const PatchMembership& membership, Index i);
AlignmentResult align_neighbors(const std::vector<LogMap2D>& patches, Index i);

struct SyncOptions {
  double eps_factor = 0.75;               // times the median 2D nearest-neighbour spacing
  std::optional<double> eps;              // absolute override
  int min_pts = 2;
  int iterations = 1;
  int workers = 1;
};

/// Consensus correction of all log maps: each member's coordinate becomes the
/// weighted mean of the largest DBSCAN cluster of its images under the aligned
/// neighbouring patches. Weights are 1 / (1 + r / r_mean), r being the image's
/// distance to its own patch center and r_mean the mean member radius of the
/// patch being corrected. Centers stay at the origin.
std::vector<LogMap2D> synchronize(const std::vector<LogMap2D>& patches, const SyncOptions& options = {});

/// Median over points of the distance to the nearest other point (center at
/// the origin included).
double median_spacing(const LogMap2D& patch);

}  // namespace dse
