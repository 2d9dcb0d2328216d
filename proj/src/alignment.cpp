#include "dse/alignment.hpp"

#include "dse/dbscan.hpp"
#include "dse/parallel.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace dse {

PatchMembership::PatchMembership(const std::vector<LogMap2D>& patches) : patches_(&patches) {
  Index max_id = -1;
  for (const auto& p : patches) {
    max_id = std::max(max_id, p.center);
    for (Index m : p.members) max_id = std::max(max_id, m);
  }
  by_point_.resize(static_cast<std::size_t>(max_id + 1));
  sorted_ids_.resize(patches.size());
  for (Index pi = 0; pi < static_cast<Index>(patches.size()); ++pi) {
    const auto& p = patches[pi];
    auto& sorted = sorted_ids_[pi];
    sorted.push_back({p.center, -1});
    by_point_[p.center].push_back({pi, -1});
    for (Index s = 0; s < p.size(); ++s) {
      sorted.push_back({p.members[s], s});
      by_point_[p.members[s]].push_back({pi, s});
    }
    std::sort(sorted.begin(), sorted.end());
  }
}

const std::vector<PatchMembership::Occurrence>& PatchMembership::occurrences(Index point) const {
  if (point < 0 || point >= static_cast<Index>(by_point_.size())) return none_;
  return by_point_[point];
}

std::optional<Vec2> PatchMembership::image(Index patch, Index point) const {
  const auto& sorted = sorted_ids_[patch];
  auto it = std::lower_bound(sorted.begin(), sorted.end(), std::pair<Index, Index>{point, std::numeric_limits<Index>::min()});
  if (it == sorted.end() || it->first != point) return std::nullopt;
  if (it->second < 0) return Vec2::Zero();
  return (*patches_)[patch].coords[it->second];
}

namespace {

// Shared points of patches i and j, as (image in i, image in j), in id order.
void correspondences(const std::vector<LogMap2D>& patches, const PatchMembership& membership, Index i, Index j,
                     std::vector<Vec2>& in_i, std::vector<Vec2>& in_j) {
  in_i.clear();
  in_j.clear();
  const auto& pi = patches[i];
  auto add = [&](Index point, const Vec2& ui) {
    if (auto uj = membership.image(j, point)) {
      in_i.push_back(ui);
      in_j.push_back(*uj);
    }
  };
  add(pi.center, Vec2::Zero());
  for (Index s = 0; s < pi.size(); ++s) add(pi.members[s], pi.coords[s]);
}

}  // namespace

AlignmentResult align_neighbors(const std::vector<LogMap2D>& patches, const PatchMembership& membership, Index i) {
  if (i < 0 || i >= static_cast<Index>(patches.size())) throw Error("align_neighbors: patch index out of range");
  std::vector<Index> candidates;
  const auto& pi = patches[i];
  auto collect = [&](Index point) {
    for (const auto& occ : membership.occurrences(point))
      if (occ.patch != i) candidates.push_back(occ.patch);
  };
  collect(pi.center);
  for (Index m : pi.members) collect(m);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  AlignmentResult result;
  std::vector<Vec2> in_i, in_j;
  for (Index j : candidates) {
    correspondences(patches, membership, i, j, in_i, in_j);
    if (in_i.size() < 3) {
      ++result.skipped;
      continue;
    }
    const auto proper = kabsch2d<double>(in_j, in_i, false);
    const auto improper = detail::kabsch2d_fixed<double>(std::span<const Vec2>(in_j), std::span<const Vec2>(in_i), true, true);
    const auto& best = proper.residual > 2.0 * improper.residual ? improper : proper;
    result.neighbors.push_back({j, best.transform, best.residual, in_i.size()});
  }
  return result;
}

AlignmentResult align_neighbors(const std::vector<LogMap2D>& patches, Index i) {
  const PatchMembership membership(patches);
  return align_neighbors(patches, membership, i);
}

double median_spacing(const LogMap2D& patch) {
  std::vector<Vec2> pts;
  pts.push_back(Vec2::Zero());
  pts.insert(pts.end(), patch.coords.begin(), patch.coords.end());
  std::vector<double> nn;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < pts.size(); ++b)
      if (a != b) best = std::min(best, (pts[a] - pts[b]).norm());
    if (std::isfinite(best)) nn.push_back(best);
  }
  if (nn.empty()) return 0.0;
  const auto mid = nn.begin() + static_cast<std::ptrdiff_t>(nn.size() / 2);
  std::nth_element(nn.begin(), mid, nn.end());
  if (nn.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(nn.begin(), mid);
  return 0.5 * (lower + upper);
}

namespace {

LogMap2D correct_patch(const std::vector<LogMap2D>& patches, const PatchMembership& membership, Index i,
                       const SyncOptions& options) {
  const LogMap2D& own = patches[i];
  LogMap2D out = own;
  if (own.members.empty()) return out;
  const AlignmentResult aligned = align_neighbors(patches, membership, i);
  if (aligned.neighbors.empty()) return out;

  double mean_radius = 0.0;
  for (const auto& u : own.coords) mean_radius += u.norm();
  mean_radius /= static_cast<double>(own.coords.size());
  if (!(mean_radius > 0.0)) return out;

  double eps = options.eps.value_or(options.eps_factor * median_spacing(own));
  if (!(eps > 0.0)) return out;

  std::map<Index, const AlignedNeighbor*> by_patch;
  for (const auto& n : aligned.neighbors) by_patch[n.patch] = &n;

  std::vector<Vec2> images;
  std::vector<double> weights;
  for (Index s = 0; s < own.size(); ++s) {
    const Index point = own.members[s];
    images.assign(1, own.coords[s]);
    weights.assign(1, 1.0 / (1.0 + own.coords[s].norm() / mean_radius));
    for (const auto& occ : membership.occurrences(point)) {
      auto it = by_patch.find(occ.patch);
      if (it == by_patch.end()) continue;
      const Vec2 local = occ.slot < 0 ? Vec2(Vec2::Zero()) : patches[occ.patch].coords[occ.slot];
      images.push_back(it->second->transform(local));
      weights.push_back(1.0 / (1.0 + local.norm() / mean_radius));
    }
    if (images.size() < 2) continue;

    const std::vector<int> labels = dbscan(images, eps, options.min_pts);
    const int clusters = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    if (clusters == 0) continue;
    std::vector<std::size_t> size(static_cast<std::size_t>(clusters), 0);
    std::vector<Vec2> sum(static_cast<std::size_t>(clusters), Vec2::Zero());
    std::vector<double> wsum(static_cast<std::size_t>(clusters), 0.0);
    for (std::size_t m = 0; m < labels.size(); ++m) {
      if (labels[m] < 0) continue;
      const auto c = static_cast<std::size_t>(labels[m]);
      ++size[c];
      sum[c] += weights[m] * images[m];
      wsum[c] += weights[m];
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < size.size(); ++c) {
      const Vec2 mc = sum[c] / wsum[c];
      const Vec2 mb = sum[best] / wsum[best];
      if (size[c] > size[best] ||
          (size[c] == size[best] && (mc - own.coords[s]).norm() < (mb - own.coords[s]).norm()))
        best = c;
    }
    out.coords[s] = sum[best] / wsum[best];
  }
  return out;
}

}  // namespace

std::vector<LogMap2D> synchronize(const std::vector<LogMap2D>& patches, const SyncOptions& options) {
  std::vector<LogMap2D> current = patches;
  for (int it = 0; it < options.iterations; ++it) {
    const PatchMembership membership(current);
    std::vector<LogMap2D> next(current.size());
    parallel_for(current.size(), options.workers,
                 [&](std::size_t i) { next[i] = correct_patch(current, membership, static_cast<Index>(i), options); });
    current = std::move(next);
  }
  return current;
}

}  // namespace dse
