#include "dse/delaunay.hpp"

#include "dse/mesh.hpp"
#include "dse/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace dse {
namespace {

using predicates::incircle_perturbed;
using predicates::orient2d;

class Builder {
 public:
  Builder(std::span<const Vec2> pts, std::vector<Index> ranks) : pts_(pts), ranks_(std::move(ranks)) {}

  std::vector<Triangle> run(const std::vector<Index>& sorted, std::vector<Index>& hull) {
    const std::size_t n = sorted.size();
    std::size_t k = 2;
    while (k < n && orient2d(pts_[sorted[0]], pts_[sorted[1]], pts_[sorted[k]]) == 0) ++k;
    if (k >= n) throw Error("delaunay2d: all points are collinear");

    const Index apex = sorted[k];
    const int side = orient2d(pts_[sorted[0]], pts_[sorted[1]], pts_[apex]);
    for (std::size_t i = 0; i + 1 < k; ++i) {
      if (side > 0)
        add_triangle({sorted[i], sorted[i + 1], apex});
      else
        add_triangle({sorted[i + 1], sorted[i], apex});
    }
    if (side > 0) {
      hull.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k));
      hull.push_back(apex);
    } else {
      hull = {sorted[0], apex};
      for (std::size_t i = k - 1; i >= 1; --i) hull.push_back(sorted[i]);
    }
    for (std::size_t i = 1; i + 1 < k; ++i) stack_.push_back({sorted[i], apex});
    legalize();

    for (std::size_t i = k + 1; i < n; ++i) insert_outside(sorted[i], hull);

    std::vector<Triangle> out;
    for (std::size_t t = 0; t < tris_.size(); ++t)
      if (alive_[t]) out.push_back(tris_[t]);
    return out;
  }

 private:
  static std::int64_t key(Index u, Index v) { return (static_cast<std::int64_t>(u) << 32) | static_cast<std::uint32_t>(v); }

  void add_triangle(const Triangle& t, std::size_t slot = std::size_t(-1)) {
    if (slot == std::size_t(-1)) {
      slot = tris_.size();
      tris_.push_back(t);
      alive_.push_back(true);
    } else {
      tris_[slot] = t;
      alive_[slot] = true;
    }
    for (int i = 0; i < 3; ++i) edges_[key(t[i], t[(i + 1) % 3])] = slot;
  }

  void remove_triangle(std::size_t slot) {
    const Triangle& t = tris_[slot];
    for (int i = 0; i < 3; ++i) edges_.erase(key(t[i], t[(i + 1) % 3]));
    alive_[slot] = false;
  }

  static Index opposite(const Triangle& t, Index u, Index v) {
    for (Index x : t)
      if (x != u && x != v) return x;
    return -1;
  }

  bool flip_if_illegal(Index a, Index b) {
    auto t1 = edges_.find(key(a, b));
    auto t2 = edges_.find(key(b, a));
    if (t1 == edges_.end() || t2 == edges_.end()) return false;
    const std::size_t s1 = t1->second, s2 = t2->second;
    const Index c = opposite(tris_[s1], a, b);
    const Index d = opposite(tris_[s2], a, b);
    if (incircle_perturbed(pts_[a], pts_[b], pts_[c], pts_[d], ranks_[a], ranks_[b], ranks_[c], ranks_[d]) <= 0)
      return false;
    remove_triangle(s1);
    remove_triangle(s2);
    add_triangle({a, d, c}, s1);
    add_triangle({d, b, c}, s2);
    stack_.push_back({a, d});
    stack_.push_back({d, b});
    stack_.push_back({b, c});
    stack_.push_back({c, a});
    return true;
  }

  void legalize() {
    while (!stack_.empty()) {
      const auto [a, b] = stack_.back();
      stack_.pop_back();
      flip_if_illegal(a, b);
    }
  }

  // `p` is lexicographically larger than every inserted point, hence strictly
  // outside the current hull.
  void insert_outside(Index p, std::vector<Index>& hull) {
    const std::size_t h = hull.size();
    std::vector<bool> visible(h);
    bool any = false;
    for (std::size_t i = 0; i < h; ++i) {
      visible[i] = orient2d(pts_[hull[i]], pts_[hull[(i + 1) % h]], pts_[p]) < 0;
      any = any || visible[i];
    }
    if (!any) throw Error("delaunay2d: internal error, no visible hull edge");
    // Visible edges are contiguous; find the first of the run.
    std::size_t first = 0;
    while (!(visible[first] && !visible[(first + h - 1) % h])) {
      ++first;
      if (first == h) throw Error("delaunay2d: internal error, hull fully visible");
    }
    std::size_t count = 0;
    while (visible[(first + count) % h]) {
      const Index u = hull[(first + count) % h];
      const Index v = hull[(first + count + 1) % h];
      add_triangle({v, u, p});
      stack_.push_back({u, v});
      ++count;
    }
    // Replace the interior vertices of the visible chain by p.
    std::vector<Index> next;
    next.reserve(h + 1);
    const std::size_t last = (first + count) % h;
    for (std::size_t i = 0; i < h; ++i) {
      const std::size_t idx = (last + i) % h;
      next.push_back(hull[idx]);
      if (idx == first) break;
    }
    next.push_back(p);
    hull = std::move(next);
    legalize();
  }

  std::span<const Vec2> pts_;
  std::vector<Index> ranks_;
  std::vector<Triangle> tris_;
  std::vector<bool> alive_;
  std::unordered_map<std::int64_t, std::size_t> edges_;
  std::vector<std::pair<Index, Index>> stack_;
};

Index find_root(std::vector<Index>& parent, Index x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

Triangulation2D delaunay2d(std::span<const Vec2> points, std::span<const Index> ranks, double merge_tolerance) {
  const Index n = static_cast<Index>(points.size());
  if (n < 3) throw Error("delaunay2d: need at least 3 points");
  if (!ranks.empty() && ranks.size() != points.size()) throw Error("delaunay2d: rank count differs from point count");
  for (const auto& p : points)
    if (!p.allFinite()) throw Error("delaunay2d: non-finite coordinate");

  Triangulation2D out;
  out.points.assign(points.begin(), points.end());
  out.on_hull.assign(points.size(), false);

  std::vector<Index> rank(points.size());
  if (ranks.empty())
    std::iota(rank.begin(), rank.end(), 0);
  else
    rank.assign(ranks.begin(), ranks.end());

  // Duplicate merge: union near-coincident points, keep the lowest index.
  Vec2 lo = points[0], hi = points[0];
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double tol = merge_tolerance * (hi - lo).norm();
  std::vector<Index> by_x(points.size());
  std::iota(by_x.begin(), by_x.end(), 0);
  std::sort(by_x.begin(), by_x.end(), [&](Index a, Index b) {
    return points[a].x() < points[b].x() || (points[a].x() == points[b].x() && a < b);
  });
  std::vector<Index> parent(points.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < by_x.size(); ++i)
    for (std::size_t j = i + 1; j < by_x.size() && points[by_x[j]].x() - points[by_x[i]].x() <= tol; ++j)
      if ((points[by_x[j]] - points[by_x[i]]).norm() <= tol) {
        const Index ra = find_root(parent, by_x[i]), rb = find_root(parent, by_x[j]);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
  out.representative.resize(points.size());
  std::vector<Index> unique;
  for (Index i = 0; i < n; ++i) {
    out.representative[i] = find_root(parent, i);
    if (out.representative[i] == i) unique.push_back(i);
  }
  if (unique.size() < 3) throw Error("delaunay2d: fewer than 3 distinct points");

  std::sort(unique.begin(), unique.end(), [&](Index a, Index b) {
    const Vec2& p = points[a];
    const Vec2& q = points[b];
    return p.x() < q.x() || (p.x() == q.x() && p.y() < q.y());
  });

  Builder builder(points, std::move(rank));
  std::vector<Index> hull;
  out.triangles = builder.run(unique, hull);
  for (Index v : hull) out.on_hull[v] = true;
  return out;
}

double min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
  const auto angle = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    const Vec2 u = q - p, v = r - p;
    return std::atan2(std::abs(u.x() * v.y() - u.y() * v.x()), u.dot(v));
  };
  return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)});
}

DelaunaySurfaceElement extract_dse(const Triangulation2D& tri, Index center, std::span<const Index> global_ids) {
  if (center < 0 || center >= static_cast<Index>(tri.points.size())) throw Error("extract_dse: center out of range");
  if (global_ids.size() != tri.points.size()) throw Error("extract_dse: id map size mismatch");
  DelaunaySurfaceElement dse;
  dse.center = global_ids[center];
  dse.boundary = tri.on_hull[center];
  for (const auto& t : tri.triangles) {
    if (t[0] != center && t[1] != center && t[2] != center) continue;
    dse.triangles.push_back(canonical_triangle(global_ids[t[0]], global_ids[t[1]], global_ids[t[2]]));
    dse.min_angles.push_back(min_angle(tri.points[t[0]], tri.points[t[1]], tri.points[t[2]]));
  }
  dse.empty = dse.triangles.empty();
  return dse;
}

bool is_single_fan(std::span<const Triangle> triangles, Index center, bool closed) {
  if (triangles.empty()) return false;
  // Each triangle contributes a rim edge; the rim must form one path/cycle.
  std::unordered_map<Index, std::vector<Index>> rim;
  for (const auto& t : triangles) {
    std::vector<Index> others;
    for (Index v : t)
      if (v != center) others.push_back(v);
    if (others.size() != 2) return false;
    rim[others[0]].push_back(others[1]);
    rim[others[1]].push_back(others[0]);
  }
  std::size_t ends = 0;
  for (const auto& [v, nb] : rim) {
    if (nb.size() > 2) return false;
    if (nb.size() == 1) ++ends;
  }
  if (closed ? ends != 0 : ends != 2) return false;
  // Connectivity of the rim graph.
  std::vector<Index> stack{rim.begin()->first};
  std::unordered_map<Index, bool> seen{{stack.back(), true}};
  while (!stack.empty()) {
    const Index v = stack.back();
    stack.pop_back();
    for (Index w : rim[v])
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  std::size_t reached = 0;
  for (const auto& [v, s] : seen) reached += s ? 1 : 0;
  return reached == rim.size();
}

}  // namespace dse
