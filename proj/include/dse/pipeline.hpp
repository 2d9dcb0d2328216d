#pragma once

#include "dse/alignment.hpp"
#include "dse/logmap.hpp"
#include "dse/metrics.hpp"
#include "dse/network.hpp"
#include "dse/types.hpp"

#include <optional>
#include <string>

namespace dse {

enum class NeighborhoodMode { heuristic, neural, euclidean };

std::string_view to_string(NeighborhoodMode m);
NeighborhoodMode parse_neighborhood(std::string_view name);

struct PipelineConfig {
  int K = 120;
  int k = 30;
  NeighborhoodMode neighborhood = NeighborhoodMode::heuristic;
  Estimator estimator = Estimator::rotation;
  bool align = true;
  bool select = true;
  SyncOptions sync;
  int graph_degree = 8;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct Diagnostics {
  int K_used = 0;
  double seconds_neighborhood = 0.0;
  double seconds_logmap = 0.0;
  double seconds_align = 0.0;
  double seconds_triangulate = 0.0;
  double seconds_select = 0.0;
  std::size_t candidates = 0;          // distinct triangles proposed by all DSEs
  std::size_t count3_candidates = 0;
  std::size_t degenerate_candidates = 0;  // collinear triples removed before selection
  double count3_fraction = 0.0;        // among output triangles
  std::size_t fallback_patches = 0;    // heuristic fell back to Euclidean order
  std::size_t failed_patches = 0;      // degenerate patch, no DSE
  std::size_t boundary_dses = 0;
  std::vector<std::string> warnings;
};

struct Reconstruction {
  TriangleMesh mesh;                 // vertex_ids are input point ids
  std::vector<int> triangle_counts;  // membership count per output triangle
  MeshReport report;                 // intrinsic metrics only
  Diagnostics diagnostics;
};

struct Networks {
  const NetworkWeights* classifier = nullptr;
  const NetworkWeights* projector = nullptr;
};

/// Full reconstruction. Throws on invalid configuration, missing networks
/// for the neural modes, or a cloud without two independent directions.
Reconstruction reconstruct(const PointCloud& cloud, const PipelineConfig& config, Networks networks = {});

struct SweepRow {
  PipelineConfig config;
  MeshReport report;
  Diagnostics diagnostics;
};

struct SweepError {
  PipelineConfig config;
  std::string message;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepError> errors;
};

/// Runs every configuration; failures are recorded and do not stop the sweep.
/// With a reference mesh the reports include Chamfer and normal error.
SweepResult sweep(const PointCloud& cloud, const std::vector<PipelineConfig>& configs, Networks networks = {},
                  const TriangleMesh* reference = nullptr, std::size_t samples = 100000);

}  // namespace dse
