#include "dse/mesh.hpp"
#include "dse/selection.hpp"
#include "dse/shapes.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

using namespace dse;

namespace {

DelaunaySurfaceElement element(Index center, std::vector<Triangle> tris, std::vector<double> angles = {}) {
  DelaunaySurfaceElement e;
  e.center = center;
  for (auto& t : tris) e.triangles.push_back(canonical_triangle(t));
  e.min_angles = angles.empty() ? std::vector<double>(e.triangles.size(), 0.5) : angles;
  return e;
}

// Umbrellas taken straight from a closed mesh.
std::vector<DelaunaySurfaceElement> umbrellas(const TriangleMesh& mesh) {
  std::vector<DelaunaySurfaceElement> out(static_cast<std::size_t>(mesh.vertex_count()));
  for (Index v = 0; v < mesh.vertex_count(); ++v) out[v].center = v;
  for (const auto& t : mesh.triangles)
    for (Index v : t) {
      out[v].triangles.push_back(canonical_triangle(t));
      out[v].min_angles.push_back(0.5);
    }
  return out;
}

}  // namespace

TEST_CASE("votes count distinct centers that are triangle vertices") {
  std::vector<DelaunaySurfaceElement> d{
      element(0, {{0, 1, 2}, {0, 2, 3}}, {0.2, 0.4}),
      element(1, {{0, 1, 2}}, {0.6}),
      element(2, {{0, 1, 2}, {0, 2, 3}}, {0.7, 0.9}),
      element(5, {{0, 1, 2}}),  // not a vertex: ignored
      element(0, {{0, 1, 2}}),  // repeated center: counted once
  };
  const auto table = count_memberships(d);
  REQUIRE(table.size() == 2);
  CHECK(table.at({0, 1, 2}).count == 3);
  CHECK(table.at({0, 1, 2}).quality == doctest::Approx((0.2 + 0.6 + 0.7) / 3));
  CHECK(table.at({0, 2, 3}).count == 2);
  CHECK(table.at({0, 2, 3}).quality == doctest::Approx(0.65));
}

TEST_CASE("priority order: count, then quality, then canonical triple") {
  CandidateTable table;
  table[{0, 1, 2}] = {1, 0.9};
  table[{0, 1, 3}] = {3, 0.1};
  table[{1, 2, 3}] = {3, 0.5};
  table[{2, 3, 4}] = {2, 0.3};
  table[{0, 3, 4}] = {2, 0.3};
  const auto order = priority_order(table);
  const std::vector<Triangle> expected{{1, 2, 3}, {0, 1, 3}, {0, 3, 4}, {2, 3, 4}, {0, 1, 2}};
  CHECK(order == expected);
}

TEST_CASE("greedy selection never lets an edge exceed two triangles") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    CandidateTable table;
    std::uniform_int_distribution<Index> v(0, 11);
    std::uniform_int_distribution<int> c(1, 3);
    std::uniform_real_distribution<double> q(0.0, 1.0);
    for (int i = 0; i < 80; ++i) {
      const Index a = v(rng), b = v(rng), d = v(rng);
      if (a == b || b == d || a == d) continue;
      table[canonical_triangle(a, b, d)] = {c(rng), q(rng)};
    }
    const auto kept = greedy_select(table);
    const auto adj = build_edge_adjacency(kept);
    CHECK(adj.max_incidence() <= 2);
    // Oracle: replay the priority order with an explicit edge counter.
    std::map<Edge, int> used;
    std::vector<Triangle> replay;
    for (const auto& t : priority_order(table)) {
      const Edge e[3] = {make_edge(t[0], t[1]), make_edge(t[1], t[2]), make_edge(t[0], t[2])};
      if (used[e[0]] < 2 && used[e[1]] < 2 && used[e[2]] < 2) {
        for (const auto& x : e) ++used[x];
        replay.push_back(t);
      }
    }
    CHECK(kept == replay);
  }
}

TEST_CASE("umbrellas of a closed mesh give back the mesh with full votes") {
  const auto sphere = shapes::icosphere(2);
  const auto table = count_memberships(umbrellas(sphere));
  CHECK(table.size() == sphere.triangles.size());
  for (const auto& [t, c] : table) CHECK(c.count == 3);
  auto kept = greedy_select(table);
  std::vector<Triangle> original;
  for (const auto& t : sphere.triangles) original.push_back(canonical_triangle(t));
  std::sort(kept.begin(), kept.end());
  std::sort(original.begin(), original.end());
  CHECK(kept == original);
}

TEST_CASE("orientation restores consistent outward winding") {
  const auto sphere = shapes::icosphere(2);
  std::vector<Triangle> shuffled;
  std::mt19937_64 rng(11);
  for (const auto& t : sphere.triangles) {
    Triangle s = canonical_triangle(t);
    if (rng() % 2) std::swap(s[1], s[2]);
    shuffled.push_back(s);
  }
  auto check_outward = [&](const std::vector<Triangle>& tris) {
    for (const auto& f : tris) {
      const Vec3& a = sphere.vertices[f[0]];
      const Vec3 n = (sphere.vertices[f[1]] - a).cross(sphere.vertices[f[2]] - a);
      CHECK(n.dot(a) > 0.0);
    }
  };
  check_outward(orient_triangles(shuffled, sphere.vertices));
  check_outward(orient_triangles(shuffled, sphere.vertices, sphere.vertices));
  // Inward-pointing normals flip the whole component.
  std::vector<Vec3> inward;
  for (const auto& p : sphere.vertices) inward.push_back(-p);
  for (const auto& f : orient_triangles(shuffled, sphere.vertices, inward)) {
    const Vec3& a = sphere.vertices[f[0]];
    CHECK((sphere.vertices[f[1]] - a).cross(sphere.vertices[f[2]] - a).dot(a) < 0.0);
  }
}

TEST_CASE("orientation keeps vertex sets and handles several components") {
  const auto grid = shapes::grid_mesh(4, 4, 1.0);
  std::vector<Triangle> tris;
  std::vector<Vec3> pos = grid.vertices;
  for (const auto& t : grid.triangles) tris.push_back({t[0], t[2], t[1]});
  // A second, disjoint patch above the first.
  const Index base = static_cast<Index>(pos.size());
  for (const auto& p : grid.vertices) pos.push_back(p + Vec3(0, 0, 5));
  for (const auto& t : grid.triangles) tris.push_back({t[0] + base, t[1] + base, t[2] + base});
  const std::vector<Vec3> up(pos.size(), Vec3::UnitZ());
  const auto out = orient_triangles(tris, pos, up);
  REQUIRE(out.size() == tris.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(canonical_triangle(out[i]) == canonical_triangle(tris[i]));
    const Vec3 n = (pos[out[i][1]] - pos[out[i][0]]).cross(pos[out[i][2]] - pos[out[i][0]]);
    CHECK(n.z() > 0.0);
  }
}
