#include "dse/pipeline.hpp"

#include "dse/delaunay.hpp"
#include "dse/knn.hpp"
#include "dse/mesh.hpp"
#include "dse/neighborhood.hpp"
#include "dse/parallel.hpp"
#include "dse/selection.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <iostream>

namespace dse {

std::string_view to_string(NeighborhoodMode m) {
  switch (m) {
    case NeighborhoodMode::heuristic: return "heuristic";
    case NeighborhoodMode::neural: return "neural";
    case NeighborhoodMode::euclidean: return "euclidean";
  }
  return "unknown";
}

NeighborhoodMode parse_neighborhood(std::string_view name) {
  if (name == "heuristic") return NeighborhoodMode::heuristic;
  if (name == "neural") return NeighborhoodMode::neural;
  if (name == "euclidean") return NeighborhoodMode::euclidean;
  throw Error("unknown neighborhood mode: " + std::string(name));
}

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

constexpr double kCollinearTolerance = 1e-10;

void check_spread(const PointCloud& cloud) {
  Vec3 mean = Vec3::Zero();
  for (const auto& p : cloud.positions) mean += p;
  mean /= static_cast<double>(cloud.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : cloud.positions) cov += (p - mean) * (p - mean).transpose();
  const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(cov, Eigen::EigenvaluesOnly).eigenvalues();
  if (!(ev[2] > 0.0) || ev[1] <= 1e-12 * ev[2]) throw Error("reconstruct: point cloud is collinear or coincident");
}

}  // namespace

Reconstruction reconstruct(const PointCloud& cloud, const PipelineConfig& config, Networks networks) {
  Reconstruction out;
  Diagnostics& diag = out.diagnostics;
  const Index n = cloud.size();
  if (config.k < 3) throw Error("reconstruct: k must be at least 3");
  if (config.K < config.k) throw Error("reconstruct: K must be at least k");
  if (config.neighborhood == NeighborhoodMode::neural && !networks.classifier)
    throw Error("reconstruct: neural neighborhoods need classifier weights");
  if (config.estimator == Estimator::neural && !networks.projector)
    throw Error("reconstruct: the neural estimator needs projector weights");
  if (networks.classifier) networks.classifier->validate();
  if (networks.projector) networks.projector->validate();

  int K = config.K;
  if (n < config.k + 1) throw Error("reconstruct: need at least k+1 points");
  if (K > n - 1) {
    if (config.neighborhood == NeighborhoodMode::neural) throw Error("reconstruct: neural mode needs at least K+1 points");
    K = n - 1;
    diag.warnings.push_back("K reduced to " + std::to_string(K) + " (cloud has " + std::to_string(n) + " points)");
    std::cerr << "warning: " << diag.warnings.back() << "\n";
  }
  diag.K_used = K;
  check_spread(cloud);

  Stopwatch clock;
  const KnnIndex index(cloud.positions);
  const auto count = static_cast<std::size_t>(n);
  std::vector<GeodesicPatch> patches(count);
  parallel_for(count, config.workers, [&](std::size_t i) {
    const CandidatePatch cand = build_candidates(cloud, index, static_cast<Index>(i), K);
    switch (config.neighborhood) {
      case NeighborhoodMode::heuristic: patches[i] = select_geodesic_heuristic(cand, config.k, config.graph_degree); break;
      case NeighborhoodMode::neural: patches[i] = select_geodesic_neural(cand, *networks.classifier, config.k); break;
      case NeighborhoodMode::euclidean: patches[i] = select_euclidean(cand, config.k); break;
    }
  });
  for (const auto& p : patches) diag.fallback_patches += p.fallback ? 1 : 0;
  diag.seconds_neighborhood = clock.lap();

  std::vector<LogMap2D> logmaps(count);
  std::vector<char> failed(count, 0);
  parallel_for(count, config.workers, [&](std::size_t i) {
    try {
      switch (config.estimator) {
        case Estimator::projection: logmaps[i] = estimate_projection(patches[i]); break;
        case Estimator::rotation: logmaps[i] = estimate_rotation(patches[i]); break;
        case Estimator::neural: logmaps[i] = estimate_neural(patches[i], *networks.projector); break;
      }
    } catch (const Error&) {
      failed[i] = 1;
      logmaps[i] = LogMap2D{};
      logmaps[i].center = static_cast<Index>(i);
      logmaps[i].estimator = config.estimator;
    }
  });
  patches.clear();
  diag.seconds_logmap = clock.lap();

  if (config.align) {
    SyncOptions sync = config.sync;
    sync.workers = config.workers;
    logmaps = synchronize(logmaps, sync);
  }
  diag.seconds_align = clock.lap();

  std::vector<DelaunaySurfaceElement> dses(count);
  parallel_for(count, config.workers, [&](std::size_t i) {
    const LogMap2D& lm = logmaps[i];
    if (failed[i] || lm.members.size() < 2) {
      failed[i] = 1;
      dses[i].center = lm.center;
      dses[i].empty = true;
      return;
    }
    std::vector<Vec2> pts{Vec2::Zero()};
    pts.insert(pts.end(), lm.coords.begin(), lm.coords.end());
    std::vector<Index> ids{lm.center};
    ids.insert(ids.end(), lm.members.begin(), lm.members.end());
    try {
      dses[i] = extract_dse(delaunay2d(pts, ids), 0, ids);
    } catch (const Error&) {
      failed[i] = 1;
      dses[i].center = lm.center;
      dses[i].empty = true;
    }
  });
  for (std::size_t i = 0; i < count; ++i) {
    diag.failed_patches += failed[i] ? 1 : 0;
    diag.boundary_dses += dses[i].boundary ? 1 : 0;
  }
  logmaps.clear();
  diag.seconds_triangulate = clock.lap();

  CandidateTable table = count_memberships(dses);
  // Exactly collinear input triples can come out of a patch embedding with a
  // rounding-level positive area; they carry no surface and are dropped.
  std::erase_if(table, [&](const auto& item) {
    const Triangle& t = item.first;
    const Vec3& a = cloud.positions[t[0]];
    const Vec3& b = cloud.positions[t[1]];
    const Vec3& c = cloud.positions[t[2]];
    const double longest = std::max({(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()});
    const bool flat = (b - a).cross(c - a).norm() <= kCollinearTolerance * longest;
    diag.degenerate_candidates += flat ? 1 : 0;
    return flat;
  });
  diag.candidates = table.size();
  for (const auto& [t, c] : table) diag.count3_candidates += c.count == 3 ? 1 : 0;
  std::vector<Triangle> chosen;
  if (config.select) {
    chosen = greedy_select(table);
  } else {
    chosen.reserve(table.size());
    for (const auto& [t, c] : table) chosen.push_back(t);
  }
  std::vector<int> counts;
  counts.reserve(chosen.size());
  std::size_t count3 = 0;
  for (const auto& t : chosen) {
    counts.push_back(table.at(t).count);
    count3 += counts.back() == 3 ? 1 : 0;
  }
  diag.count3_fraction = chosen.empty() ? 0.0 : static_cast<double>(count3) / static_cast<double>(chosen.size());
  chosen = orient_triangles(chosen, cloud.positions, cloud.normals);
  diag.seconds_select = clock.lap();

  TriangleMesh full = make_mesh(cloud.positions, std::move(chosen));
  out.mesh = compact_mesh(full);
  out.triangle_counts = std::move(counts);
  out.report = intrinsic_report(out.mesh);
  return out;
}

SweepResult sweep(const PointCloud& cloud, const std::vector<PipelineConfig>& configs, Networks networks,
                  const TriangleMesh* reference, std::size_t samples) {
  SweepResult result;
  for (const auto& config : configs) {
    try {
      Reconstruction r = reconstruct(cloud, config, networks);
      MeshReport report = reference ? evaluate(r.mesh, *reference, samples, config.seed) : r.report;
      result.rows.push_back({config, std::move(report), std::move(r.diagnostics)});
    } catch (const std::exception& e) {
      result.errors.push_back({config, e.what()});
    }
  }
  return result;
}

}  // namespace dse
