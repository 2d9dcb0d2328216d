#include "dse/shapes.hpp"

#include "dse/knn.hpp"
#include "dse/mesh.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

namespace dse::shapes {

TriangleMesh icosphere(int level) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<Triangle> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
                             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
                             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<Index, Index>, Index> midpoints;
    auto midpoint = [&](Index a, Index b) {
      auto key = a < b ? std::pair{a, b} : std::pair{b, a};
      auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const Index id = static_cast<Index>(v.size() - 1);
      midpoints.emplace(key, id);
      return id;
    };
    std::vector<Triangle> next;
    next.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const Index a = midpoint(tri[0], tri[1]);
      const Index b = midpoint(tri[1], tri[2]);
      const Index c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  return make_mesh(std::move(v), std::move(f));
}

TriangleMesh grid_mesh(int nx, int ny, double spacing) {
  std::vector<Vec3> v;
  v.reserve(static_cast<std::size_t>(nx * ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) v.emplace_back(i * spacing, j * spacing, 0.0);
  std::vector<Triangle> f;
  auto id = [nx](int i, int j) { return static_cast<Index>(j * nx + i); };
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return make_mesh(std::move(v), std::move(f));
}

PointCloud triangular_lattice(int nx, int ny, double spacing) {
  std::vector<Vec3> p, n;
  const double row = spacing * std::sqrt(3.0) / 2.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      p.emplace_back((i + 0.5 * (j % 2)) * spacing, j * row, 0.0);
      n.emplace_back(0.0, 0.0, 1.0);
    }
  return PointCloud(std::move(p), std::move(n));
}

TriangleMesh cylinder_mesh(double radius, double height, int around, int rings) {
  std::vector<Vec3> v;
  for (int j = 0; j < rings; ++j) {
    const double z = height * j / (rings - 1);
    for (int i = 0; i < around; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / around;
      v.emplace_back(radius * std::cos(phi), radius * std::sin(phi), z);
    }
  }
  std::vector<Triangle> f;
  auto id = [around](int i, int j) { return static_cast<Index>(j * around + (i % around)); };
  for (int j = 0; j + 1 < rings; ++j)
    for (int i = 0; i < around; ++i) {
      f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return make_mesh(std::move(v), std::move(f));
}

PointCloud sphere_samples(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec3> p;
  p.reserve(n);
  while (p.size() < n) {
    Vec3 x(gauss(rng), gauss(rng), gauss(rng));
    const double len = x.norm();
    if (len < 1e-12) continue;
    p.push_back(x / len);
  }
  std::vector<Vec3> normals = p;
  return PointCloud(std::move(p), std::move(normals));
}

PointCloud rounded_box_samples(std::size_t n, double half, double fillet, std::uint64_t seed) {
  if (!(fillet > 0.0) || fillet >= half) throw Error("rounded_box_samples: need 0 < fillet < half");
  const double a = half - fillet;
  const double pi = std::numbers::pi;
  const double face_area = 6.0 * (2 * a) * (2 * a);
  const double edge_area = 12.0 * (pi * fillet / 2.0) * (2 * a);
  const double corner_area = 4.0 * pi * fillet * fillet;
  const double total = face_area + edge_area + corner_area;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec3> p, nrm;
  p.reserve(n);
  nrm.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double pick = unit(rng) * total;
    Vec3 core, dir;
    if (pick < face_area) {
      const int face = std::min(5, static_cast<int>(unit(rng) * 6));
      const int axis = face / 2;
      const double sign = (face % 2) ? -1.0 : 1.0;
      dir = Vec3::Zero();
      dir[axis] = sign;
      core = Vec3::Zero();
      core[axis] = sign * a;
      core[(axis + 1) % 3] = (2 * unit(rng) - 1) * a;
      core[(axis + 2) % 3] = (2 * unit(rng) - 1) * a;
    } else if (pick < face_area + edge_area) {
      // Edge parallel to `axis`, at the corner given by two signs.
      const int e = std::min(11, static_cast<int>(unit(rng) * 12));
      const int axis = e / 4;
      const double s1 = (e & 1) ? -1.0 : 1.0;
      const double s2 = (e & 2) ? -1.0 : 1.0;
      const double theta = unit(rng) * pi / 2.0;
      core = Vec3::Zero();
      dir = Vec3::Zero();
      core[axis] = (2 * unit(rng) - 1) * a;
      core[(axis + 1) % 3] = s1 * a;
      core[(axis + 2) % 3] = s2 * a;
      dir[(axis + 1) % 3] = s1 * std::cos(theta);
      dir[(axis + 2) % 3] = s2 * std::sin(theta);
    } else {
      Vec3 g(gauss(rng), gauss(rng), gauss(rng));
      while (g.norm() < 1e-12) g = Vec3(gauss(rng), gauss(rng), gauss(rng));
      dir = g.normalized();
      core = Vec3(dir.x() >= 0 ? a : -a, dir.y() >= 0 ? a : -a, dir.z() >= 0 ? a : -a);
    }
    p.push_back(core + fillet * dir);
    nrm.push_back(dir.normalized());
  }
  return PointCloud(std::move(p), std::move(nrm));
}

PointCloud eliminate_samples(const PointCloud& dense, std::size_t n, double area) {
  if (n > static_cast<std::size_t>(dense.size())) throw Error("eliminate_samples: fewer input samples than requested");
  if (!(area > 0.0)) throw Error("eliminate_samples: area must be positive");
  const std::size_t m = dense.positions.size();
  const double reach = 2.0 * std::sqrt(area / (2.0 * std::sqrt(3.0) * static_cast<double>(n)));
  const KnnIndex index(dense.positions);
  const int probe = static_cast<int>(std::min<std::size_t>(m - 1, 64));

  std::vector<std::vector<std::pair<Index, double>>> near(m);
  std::vector<double> weight(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& nb : index.knn(static_cast<Index>(i), probe)) {
      if (nb.distance >= reach) break;
      const double w = std::pow(1.0 - nb.distance / reach, 8);
      near[i].push_back({nb.id, w});
      weight[i] += w;
    }
  }
  std::set<std::pair<double, Index>> queue;
  for (std::size_t i = 0; i < m; ++i) queue.insert({weight[i], static_cast<Index>(i)});
  std::vector<bool> alive(m, true);
  for (std::size_t remaining = m; remaining > n; --remaining) {
    const auto top = std::prev(queue.end());
    const Index i = top->second;
    queue.erase(top);
    alive[i] = false;
    for (const auto& [j, w] : near[i]) {
      if (!alive[j]) continue;
      queue.erase({weight[j], j});
      weight[j] -= w;
      queue.insert({weight[j], j});
    }
  }
  std::vector<Vec3> pts, nrm;
  for (std::size_t i = 0; i < m; ++i) {
    if (!alive[i]) continue;
    pts.push_back(dense.positions[i]);
    if (dense.has_normals()) nrm.push_back(dense.normals[i]);
  }
  return PointCloud(std::move(pts), std::move(nrm));
}

}  // namespace dse::shapes
