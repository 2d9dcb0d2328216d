#pragma once

#include "dse/types.hpp"

#include <Eigen/Dense>

#include <span>

namespace dse {

enum class NetworkKind : std::uint32_t { classifier = 0, projector = 1 };

enum class LayerKind : std::uint32_t {
  linear = 0,         // per-point affine map, in -> out
  relu = 1,           // in == out
  global_maxpool = 2, // per-point features -> one global vector, in == out
  concat_global = 3,  // per point [input features | global vector], out = input width + in
};

struct LayerSpec {
  LayerKind kind = LayerKind::linear;
  std::uint32_t in = 0;
  std::uint32_t out = 0;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Featurization contract shared with the trainer: rows are centered on the
/// patch center and scaled so the farthest point has norm 1.
inline constexpr std::uint32_t kNormalizationCenterUnitRadius = 1;
inline constexpr std::uint32_t kPointFeatureWidth = 4;

/// Layer table plus coefficients for each linear layer. Coefficients are held
/// as doubles whose values are exactly representable in 32 bits (the file
/// format); accumulation happens in double.
struct NetworkWeights {
  NetworkKind kind = NetworkKind::classifier;
  std::uint32_t normalization = kNormalizationCenterUnitRadius;
  std::vector<LayerSpec> layers;
  std::vector<Eigen::MatrixXd> weights;  // one per linear layer, out x in
  std::vector<Eigen::VectorXd> biases;   // one per linear layer

  /// Throws unless widths chain from 4 to the kind's output width, there is
  /// exactly one global max-pool followed directly by one concat, and the
  /// coefficient blocks match the linear layers.
  void validate() const;

  std::uint32_t output_width() const { return kind == NetworkKind::classifier ? 1u : 2u; }
  std::uint32_t global_width() const;

  /// All-zero coefficients for a layer table.
  static NetworkWeights zeros(NetworkKind kind, std::vector<LayerSpec> layers);
};

/// Default table: 4-64-128-1024 encoder (ReLU), max-pool, concat, then
/// 1028-512-256 and 256-128-64-out blocks with ReLU on hidden layers.
std::vector<LayerSpec> default_architecture(NetworkKind kind);

/// Row 0 is the patch center (all zeros); rows 1.. are the patch points.
/// Columns: x, y, z relative to the center, Euclidean distance to the center;
/// all multiplied by `scale` = 1 / max distance.
struct PatchFeatures {
  Eigen::MatrixXd rows;
  double scale = 1.0;
};

/// Throws if every offset is zero.
PatchFeatures featurize(std::span<const Vec3> offsets);

/// Raw network output, one row per input row.
Eigen::MatrixXd forward(const PatchFeatures& features, const NetworkWeights& net);

/// Sigmoid of the classifier logit per row.
Eigen::VectorXd forward_classifier(const PatchFeatures& features, const NetworkWeights& net);

/// Per-row 2D coordinates in normalized units (divide by features.scale for
/// model units).
Eigen::MatrixXd forward_projector(const PatchFeatures& features, const NetworkWeights& net);

}  // namespace dse
