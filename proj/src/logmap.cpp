#include "dse/logmap.hpp"

#include "dse/network.hpp"
#include "dse/normals.hpp"

#include <cmath>

namespace dse {

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::projection: return "projection";
    case Estimator::rotation: return "rotation";
    case Estimator::neural: return "neural";
  }
  return "unknown";
}

Estimator parse_estimator(std::string_view name) {
  if (name == "projection") return Estimator::projection;
  if (name == "rotation") return Estimator::rotation;
  if (name == "neural") return Estimator::neural;
  throw Error("unknown estimator: " + std::string(name));
}

namespace {

Vec3 patch_normal(const GeodesicPatch& patch, const std::optional<Vec3>& normal) {
  if (normal) return normal->normalized();
  std::vector<Vec3> pts;
  pts.reserve(patch.offsets.size() + 1);
  pts.push_back(Vec3::Zero());
  pts.insert(pts.end(), patch.offsets.begin(), patch.offsets.end());
  return estimate_normal_pca<double>(pts);
}

LogMap2D empty_like(const GeodesicPatch& patch, Estimator e) {
  LogMap2D out;
  out.center = patch.center;
  out.members = patch.members;
  out.estimator = e;
  out.coords.reserve(patch.members.size());
  return out;
}

}  // namespace

LogMap2D estimate_projection(const GeodesicPatch& patch, std::optional<Vec3> normal) {
  const Vec3 n = patch_normal(patch, normal);
  const auto [e1, e2] = tangent_basis<double>(n);
  LogMap2D out = empty_like(patch, Estimator::projection);
  for (const auto& o : patch.offsets) out.coords.emplace_back(o.dot(e1), o.dot(e2));
  return out;
}

LogMap2D estimate_rotation(const GeodesicPatch& patch, std::optional<Vec3> normal) {
  const Vec3 n = patch_normal(patch, normal);
  const auto [e1, e2] = tangent_basis<double>(n);
  LogMap2D out = empty_like(patch, Estimator::rotation);
  for (std::size_t j = 0; j < patch.offsets.size(); ++j) {
    const Vec3& o = patch.offsets[j];
    const Vec2 t(o.dot(e1), o.dot(e2));
    const double r = o.norm();
    const double len = t.norm();
    if (len <= 1e-15 * std::max(1.0, r)) {
      out.coords.emplace_back(r, 0.0);
      ++out.degenerate;
    } else {
      out.coords.push_back(t * (r / len));
    }
  }
  return out;
}

LogMap2D estimate_neural(const GeodesicPatch& patch, const NetworkWeights& projector) {
  if (projector.kind != NetworkKind::projector) throw Error("estimate_neural: weights are not a projector");
  const PatchFeatures features = featurize(patch.offsets);
  const Eigen::MatrixXd uv = forward_projector(features, projector);
  LogMap2D out = empty_like(patch, Estimator::neural);
  const Vec2 origin = uv.row(0).transpose();
  for (Eigen::Index r = 1; r < uv.rows(); ++r) out.coords.push_back((Vec2(uv.row(r).transpose()) - origin) / features.scale);
  return out;
}

}  // namespace dse
