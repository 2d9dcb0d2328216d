#include "dse/metrics.hpp"

#include "dse/kabsch.hpp"
#include "dse/knn.hpp"
#include "dse/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <unordered_map>

namespace dse {
namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

double directed_mean(std::span<const Vec3> from, const KnnIndex& to) {
  double sum = 0.0;
  for (const Vec3& p : from) sum += to.nearest(p).distance;
  return sum / static_cast<double>(from.size());
}

}  // namespace

double nonwatertight_ratio(const TriangleMesh& mesh) {
  if (mesh.empty()) {
    std::cerr << "warning: nonwatertight_ratio of an empty mesh is reported as 0\n";
    return 0.0;
  }
  const EdgeAdjacency adj = build_edge_adjacency(mesh);
  return 100.0 * static_cast<double>(adj.count_with_incidence(1)) / static_cast<double>(adj.edge_count());
}

double chamfer(std::span<const Vec3> a, std::span<const Vec3> b) {
  if (a.empty() || b.empty()) throw Error("chamfer: empty point set");
  const KnnIndex ia(std::vector<Vec3>(a.begin(), a.end()));
  const KnnIndex ib(std::vector<Vec3>(b.begin(), b.end()));
  return directed_mean(a, ib) + directed_mean(b, ia);
}

NormalError normal_error(const TriangleMesh& mesh, std::span<const Vec3> reference) {
  if (reference.size() != mesh.vertices.size()) throw Error("normal_error: one reference normal per vertex required");
  std::vector<Vec3> acc(mesh.vertices.size(), Vec3::Zero());
  for (const auto& t : mesh.triangles) {
    const Vec3 n = (mesh.vertices[t[1]] - mesh.vertices[t[0]]).cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]);
    for (Index v : t) acc[v] += n;
  }
  std::vector<bool> touched(mesh.vertices.size(), false);
  for (const auto& t : mesh.triangles)
    for (Index v : t) touched[v] = true;

  NormalError out;
  double sum = 0.0;
  for (std::size_t v = 0; v < acc.size(); ++v) {
    if (!touched[v]) {
      ++out.excluded;
      continue;
    }
    const double len = acc[v].norm() * reference[v].norm();
    const double c = len > 0.0 ? std::min(1.0, std::abs(acc[v].dot(reference[v])) / len) : 0.0;
    sum += std::acos(c) * kDeg;
    ++out.evaluated;
  }
  if (out.evaluated) out.mean_deg = sum / static_cast<double>(out.evaluated);
  return out;
}

std::array<double, 3> triangle_angles_deg(const Vec3& a, const Vec3& b, const Vec3& c, bool* degenerate) {
  const Vec3* p[3] = {&a, &b, &c};
  std::array<double, 3> out{};
  const double area2 = (b - a).cross(c - a).norm();
  if (degenerate) *degenerate = false;
  if (!(area2 > 0.0)) {
    if (degenerate) *degenerate = true;
    // The obtuse corner is the vertex opposite the longest side.
    const double l[3] = {(b - c).norm(), (c - a).norm(), (a - b).norm()};
    const int big = static_cast<int>(std::max_element(l, l + 3) - l);
    out[big] = 180.0;
    return out;
  }
  for (int i = 0; i < 3; ++i) {
    const Vec3 u = *p[(i + 1) % 3] - *p[i];
    const Vec3 v = *p[(i + 2) % 3] - *p[i];
    out[i] = std::atan2(u.cross(v).norm(), u.dot(v)) * kDeg;
  }
  return out;
}

AngleStats angle_stats(const TriangleMesh& mesh) {
  if (mesh.empty()) throw Error("angle_stats: empty mesh");
  AngleStats out;
  std::vector<double> angles;
  angles.reserve(3 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    bool degenerate = false;
    const auto a = triangle_angles_deg(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]], &degenerate);
    if (degenerate) ++out.degenerate;
    angles.insert(angles.end(), a.begin(), a.end());
  }
  double sum = 0.0;
  for (double a : angles) sum += a;
  out.mean_deg = sum / static_cast<double>(angles.size());
  double var = 0.0;
  for (double a : angles) var += (a - out.mean_deg) * (a - out.mean_deg);
  out.stddev_deg = std::sqrt(var / static_cast<double>(angles.size()));
  for (double a : angles) ++out.histogram[std::clamp(static_cast<int>(std::floor(a)), 0, 179)];
  return out;
}

LogMapError logmap_mse(const LogMap2D& estimated, const GroundTruthLogMap& gt) {
  if (estimated.members.size() != gt.ids.size()) throw Error("logmap_mse: member count mismatch");
  if (gt.ids.empty()) throw Error("logmap_mse: empty patch");
  std::unordered_map<Index, std::size_t> where;
  for (std::size_t j = 0; j < gt.ids.size(); ++j) where.emplace(gt.ids[j], j);
  std::vector<Vec2> est, ref;
  est.reserve(gt.ids.size());
  ref.reserve(gt.ids.size());
  LogMapError out;
  for (std::size_t j = 0; j < estimated.members.size(); ++j) {
    auto it = where.find(estimated.members[j]);
    if (it == where.end()) throw Error("logmap_mse: member ids differ");
    est.push_back(estimated.coords[j]);
    ref.push_back(gt.coords[it->second]);
    const double dr = est.back().norm() - ref.back().norm();
    out.geodesic_mse += dr * dr;
  }
  const double n = static_cast<double>(est.size());
  out.geodesic_mse /= n;
  if (est.size() >= 2) out.position_mse = kabsch2d<double>(est, ref, true).residual / n;
  return out;
}

MeshReport intrinsic_report(const TriangleMesh& mesh) {
  MeshReport r;
  r.vertices = mesh.vertices.size();
  r.triangles = mesh.triangles.size();
  r.nw_percent = nonwatertight_ratio(mesh);
  if (!mesh.empty()) {
    const EdgeAdjacency adj = build_edge_adjacency(mesh);
    r.edges = adj.edge_count();
    for (const auto& [e, inc] : adj.incidence)
      if (inc.size() > 2) ++r.nonmanifold_edges;
    const AngleStats a = angle_stats(mesh);
    r.angle_stddev_deg = a.stddev_deg;
    r.angle_histogram = a.histogram;
    r.degenerate_triangles = a.degenerate;
  }
  return r;
}

MeshReport evaluate(const TriangleMesh& mesh, const TriangleMesh& reference, std::size_t samples, std::uint64_t seed) {
  MeshReport r = intrinsic_report(mesh);
  if (mesh.empty()) return r;
  const PointCloud ps = sample_surface(mesh, samples, seed);
  const PointCloud gs = sample_surface(reference, samples, seed + 1);
  r.chamfer = chamfer(ps, gs);
  r.chamfer_samples = samples;

  const KnnIndex gindex(gs.positions);
  std::vector<Vec3> ref_normals;
  ref_normals.reserve(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) ref_normals.push_back(gs.normals[gindex.nearest(v).id]);
  const NormalError ne = normal_error(mesh, ref_normals);
  r.normal_error_deg = ne.mean_deg;
  r.normal_excluded = ne.excluded;
  return r;
}

}  // namespace dse
