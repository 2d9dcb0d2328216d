#include "dse/selection.hpp"

#include "dse/mesh.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace dse {

CandidateTable count_memberships(std::span<const DelaunaySurfaceElement> dses) {
  std::map<Triangle, std::set<Index>> proposers;
  std::map<Triangle, double> quality_sum;
  for (const auto& dse : dses) {
    for (std::size_t t = 0; t < dse.triangles.size(); ++t) {
      const Triangle& tri = dse.triangles[t];
      if (tri[0] != dse.center && tri[1] != dse.center && tri[2] != dse.center) continue;
      if (proposers[tri].insert(dse.center).second)
        quality_sum[tri] += t < dse.min_angles.size() ? dse.min_angles[t] : 0.0;
    }
  }
  CandidateTable table;
  for (const auto& [tri, who] : proposers) {
    CandidateTriangle c;
    c.count = static_cast<int>(who.size());
    c.quality = quality_sum[tri] / c.count;
    table.emplace(tri, c);
  }
  return table;
}

std::vector<Triangle> priority_order(const CandidateTable& table) {
  std::vector<std::pair<Triangle, CandidateTriangle>> items(table.begin(), table.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    if (a.second.quality != b.second.quality) return a.second.quality > b.second.quality;
    return a.first < b.first;
  });
  std::vector<Triangle> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(it.first);
  return out;
}

std::vector<Triangle> greedy_select(const CandidateTable& table) {
  std::map<Edge, int> used;
  std::vector<Triangle> kept;
  for (const Triangle& t : priority_order(table)) {
    const Edge e[3] = {make_edge(t[0], t[1]), make_edge(t[1], t[2]), make_edge(t[0], t[2])};
    bool ok = true;
    for (const auto& edge : e) {
      auto it = used.find(edge);
      if (it != used.end() && it->second >= 2) ok = false;
    }
    if (!ok) continue;
    for (const auto& edge : e) ++used[edge];
    kept.push_back(t);
  }
  return kept;
}

std::vector<Triangle> orient_triangles(std::span<const Triangle> triangles, std::span<const Vec3> positions,
                                       std::span<const Vec3> normals) {
  std::vector<Triangle> out(triangles.begin(), triangles.end());
  const EdgeAdjacency adj = build_edge_adjacency(out);
  std::vector<int> component(out.size(), -1);
  int components = 0;

  auto has_directed = [](const Triangle& t, Index u, Index v) {
    for (int i = 0; i < 3; ++i)
      if (t[i] == u && t[(i + 1) % 3] == v) return true;
    return false;
  };

  for (std::size_t seed = 0; seed < out.size(); ++seed) {
    if (component[seed] >= 0) continue;
    const int comp = components++;
    std::vector<std::size_t> members{seed};
    component[seed] = comp;
    std::deque<std::size_t> queue{seed};
    while (!queue.empty()) {
      const std::size_t t = queue.front();
      queue.pop_front();
      for (int i = 0; i < 3; ++i) {
        const Index u = out[t][i], v = out[t][(i + 1) % 3];
        const auto& inc = adj.incidence.at(make_edge(u, v));
        if (inc.size() != 2) continue;
        const auto other = static_cast<std::size_t>(inc[0] == static_cast<Index>(t) ? inc[1] : inc[0]);
        if (component[other] >= 0) continue;
        // The neighbour must traverse the shared edge as v -> u.
        if (has_directed(out[other], u, v)) std::swap(out[other][1], out[other][2]);
        component[other] = comp;
        members.push_back(other);
        queue.push_back(other);
      }
    }

    double vote = 0.0;
    if (!normals.empty()) {
      for (std::size_t t : members) {
        const Triangle& f = out[t];
        const Vec3 n = (positions[f[1]] - positions[f[0]]).cross(positions[f[2]] - positions[f[0]]);
        for (Index v : f) vote += n.dot(normals[v]) >= 0.0 ? 1.0 : -1.0;
      }
    } else {
      Vec3 centroid = Vec3::Zero();
      for (std::size_t t : members)
        for (Index v : out[t]) centroid += positions[v];
      centroid /= 3.0 * static_cast<double>(members.size());
      for (std::size_t t : members) {
        const Triangle& f = out[t];
        const Vec3 a = positions[f[0]] - centroid, b = positions[f[1]] - centroid, c = positions[f[2]] - centroid;
        vote += a.dot(b.cross(c));
      }
    }
    if (vote < 0.0)
      for (std::size_t t : members) std::swap(out[t][1], out[t][2]);
  }
  return out;
}

}  // namespace dse
