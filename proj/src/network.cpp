#include "dse/network.hpp"

#include <cmath>

namespace dse {

std::uint32_t NetworkWeights::global_width() const {
  for (const auto& l : layers)
    if (l.kind == LayerKind::global_maxpool) return l.out;
  return 0;
}

void NetworkWeights::validate() const {
  if (normalization != kNormalizationCenterUnitRadius) throw Error("network: unsupported normalization tag");
  if (layers.empty()) throw Error("network: empty layer table");
  std::uint32_t width = kPointFeatureWidth;
  int pools = 0, concats = 0;
  std::size_t linear = 0;
  bool global_state = false;
  for (const auto& l : layers) {
    if (l.in != width) throw Error("network: layer input width does not chain");
    switch (l.kind) {
      case LayerKind::linear:
        if (global_state) throw Error("network: linear layer between max-pool and concat");
        if (linear >= weights.size() || linear >= biases.size()) throw Error("network: missing coefficients");
        if (weights[linear].rows() != l.out || weights[linear].cols() != l.in || biases[linear].size() != l.out)
          throw Error("network: coefficient block shape mismatch");
        ++linear;
        break;
      case LayerKind::relu:
        if (l.out != l.in) throw Error("network: activation must preserve width");
        break;
      case LayerKind::global_maxpool:
        if (l.out != l.in || global_state) throw Error("network: malformed max-pool");
        global_state = true;
        ++pools;
        break;
      case LayerKind::concat_global:
        if (!global_state || l.out != l.in + kPointFeatureWidth) throw Error("network: malformed concat");
        global_state = false;
        ++concats;
        break;
      default:
        throw Error("network: unknown layer kind");
    }
    width = l.out;
  }
  if (pools != 1 || concats != 1) throw Error("network: need exactly one max-pool and one concat");
  if (global_state) throw Error("network: max-pool output never concatenated");
  if (width != output_width()) throw Error("network: output width does not match network kind");
  if (linear != weights.size() || linear != biases.size()) throw Error("network: extra coefficient blocks");
}

NetworkWeights NetworkWeights::zeros(NetworkKind kind, std::vector<LayerSpec> layers) {
  NetworkWeights net;
  net.kind = kind;
  net.layers = std::move(layers);
  for (const auto& l : net.layers)
    if (l.kind == LayerKind::linear) {
      net.weights.push_back(Eigen::MatrixXd::Zero(l.out, l.in));
      net.biases.push_back(Eigen::VectorXd::Zero(l.out));
    }
  net.validate();
  return net;
}

std::vector<LayerSpec> default_architecture(NetworkKind kind) {
  const std::uint32_t out = kind == NetworkKind::classifier ? 1 : 2;
  std::vector<LayerSpec> layers;
  auto dense = [&](std::uint32_t in, std::uint32_t o, bool activation) {
    layers.push_back({LayerKind::linear, in, o});
    if (activation) layers.push_back({LayerKind::relu, o, o});
  };
  dense(4, 64, true);
  dense(64, 128, true);
  dense(128, 1024, true);
  layers.push_back({LayerKind::global_maxpool, 1024, 1024});
  layers.push_back({LayerKind::concat_global, 1024, 1028});
  dense(1028, 512, true);
  dense(512, 256, true);
  dense(256, 128, true);
  dense(128, 64, true);
  dense(64, out, false);
  return layers;
}

PatchFeatures featurize(std::span<const Vec3> offsets) {
  double radius = 0.0;
  for (const auto& o : offsets) radius = std::max(radius, o.norm());
  if (!(radius > 0.0)) throw Error("featurize: zero-radius patch");
  PatchFeatures f;
  f.scale = 1.0 / radius;
  f.rows.setZero(static_cast<Eigen::Index>(offsets.size()) + 1, kPointFeatureWidth);
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i) + 1;
    f.rows.block<1, 3>(r, 0) = (offsets[i] * f.scale).transpose();
    f.rows(r, 3) = offsets[i].norm() * f.scale;
  }
  return f;
}

Eigen::MatrixXd forward(const PatchFeatures& features, const NetworkWeights& net) {
  if (features.rows.cols() != kPointFeatureWidth) throw Error("forward: feature width must be 4");
  if (features.rows.rows() == 0) throw Error("forward: empty patch");
  Eigen::MatrixXd x = features.rows;  // points x width
  Eigen::RowVectorXd global;
  std::size_t linear = 0;
  for (const auto& l : net.layers) {
    switch (l.kind) {
      case LayerKind::linear: {
        if (x.cols() != l.in) throw Error("forward: width mismatch");
        Eigen::MatrixXd y = x * net.weights[linear].transpose();
        y.rowwise() += net.biases[linear].transpose();
        x = std::move(y);
        ++linear;
        break;
      }
      case LayerKind::relu:
        x = x.cwiseMax(0.0);
        break;
      case LayerKind::global_maxpool:
        global = x.colwise().maxCoeff();
        break;
      case LayerKind::concat_global: {
        Eigen::MatrixXd y(features.rows.rows(), kPointFeatureWidth + global.size());
        y.leftCols(kPointFeatureWidth) = features.rows;
        y.rightCols(global.size()) = global.replicate(features.rows.rows(), 1);
        x = std::move(y);
        break;
      }
    }
  }
  if (x.cols() != net.output_width()) throw Error("forward: output width mismatch");
  return x;
}

Eigen::VectorXd forward_classifier(const PatchFeatures& features, const NetworkWeights& net) {
  if (net.kind != NetworkKind::classifier) throw Error("forward_classifier: weights are not a classifier");
  net.validate();
  const Eigen::MatrixXd logits = forward(features, net);
  return logits.col(0).unaryExpr([](double z) { return 1.0 / (1.0 + std::exp(-z)); });
}

Eigen::MatrixXd forward_projector(const PatchFeatures& features, const NetworkWeights& net) {
  if (net.kind != NetworkKind::projector) throw Error("forward_projector: weights are not a projector");
  net.validate();
  return forward(features, net);
}

}  // namespace dse
