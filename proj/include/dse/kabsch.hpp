#pragma once

#include "dse/types.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <span>

namespace dse {

/// x -> rotation * x + translation with an orthogonal `rotation` (det +-1).
template <typename Scalar>
struct RigidTransform2D {
  Matrix2<Scalar> rotation = Matrix2<Scalar>::Identity();
  Vector2<Scalar> translation = Vector2<Scalar>::Zero();

  Vector2<Scalar> operator()(const Vector2<Scalar>& x) const { return rotation * x + translation; }
  bool is_reflection() const { return rotation.determinant() < Scalar(0); }
  Scalar angle() const { return std::atan2(rotation(1, 0), rotation(0, 0)); }
};

template <typename Scalar>
struct Kabsch2DResult {
  RigidTransform2D<Scalar> transform;
  Scalar residual = 0;  // sum of squared distances after alignment
};

namespace detail {

// Best transform of the given handedness. With `reflect`, src is mirrored
// across the x axis before the rotation fit.
template <typename Scalar>
Kabsch2DResult<Scalar> kabsch2d_fixed(std::span<const Vector2<Scalar>> src, std::span<const Vector2<Scalar>> dst,
                                      bool reflect, bool with_translation) {
  const std::size_t n = src.size();
  Vector2<Scalar> src_mean = Vector2<Scalar>::Zero(), dst_mean = Vector2<Scalar>::Zero();
  if (with_translation) {
    for (std::size_t i = 0; i < n; ++i) {
      src_mean += src[i];
      dst_mean += dst[i];
    }
    src_mean /= Scalar(n);
    dst_mean /= Scalar(n);
  }
  const Matrix2<Scalar> mirror = reflect ? Matrix2<Scalar>(Eigen::Vector2<Scalar>(1, -1).asDiagonal())
                                         : Matrix2<Scalar>::Identity();
  // Maximise sum d . R s over rotations R(theta): theta = atan2(cross, dot).
  Scalar dot = 0, cross = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector2<Scalar> s = mirror * (src[i] - src_mean);
    const Vector2<Scalar> d = dst[i] - dst_mean;
    dot += s.dot(d);
    cross += s.x() * d.y() - s.y() * d.x();
  }
  const Scalar theta = (dot == Scalar(0) && cross == Scalar(0)) ? Scalar(0) : std::atan2(cross, dot);
  Kabsch2DResult<Scalar> out;
  out.transform.rotation = Eigen::Rotation2D<Scalar>(theta).toRotationMatrix() * mirror;
  out.transform.translation = dst_mean - out.transform.rotation * src_mean;
  for (std::size_t i = 0; i < n; ++i) out.residual += (out.transform(src[i]) - dst[i]).squaredNorm();
  return out;
}

}  // namespace detail

/// Least-squares rigid alignment of `src` onto `dst` (centroid-subtracted 2x2
/// cross-covariance). Reflections are considered only with `allow_reflection`;
/// the proper rotation wins ties. Without `with_translation` the fit is about
/// the origin. Coincident inputs give the identity rotation and the centroid
/// translation.
template <typename Scalar>
Kabsch2DResult<Scalar> kabsch2d(std::span<const Vector2<Scalar>> src, std::span<const Vector2<Scalar>> dst,
                                bool allow_reflection, bool with_translation = true) {
  if (src.size() != dst.size()) throw Error("kabsch2d: correspondence lists differ in length");
  if (src.size() < 2 && with_translation) throw Error("kabsch2d: need at least 2 correspondences");
  if (src.empty()) throw Error("kabsch2d: need at least 1 correspondence");
  auto proper = detail::kabsch2d_fixed<Scalar>(src, dst, false, with_translation);
  if (!allow_reflection) return proper;
  auto improper = detail::kabsch2d_fixed<Scalar>(src, dst, true, with_translation);
  return improper.residual < proper.residual ? improper : proper;
}

template <typename Scalar>
Kabsch2DResult<Scalar> kabsch2d(const std::vector<Vector2<Scalar>>& src, const std::vector<Vector2<Scalar>>& dst,
                                bool allow_reflection, bool with_translation = true) {
  return kabsch2d<Scalar>(std::span<const Vector2<Scalar>>(src), std::span<const Vector2<Scalar>>(dst),
                          allow_reflection, with_translation);
}

}  // namespace dse
