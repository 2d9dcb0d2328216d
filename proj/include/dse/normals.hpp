#pragma once

#include "dse/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <span>

namespace dse {

/// Flips `n` so that it points into the +z half space; on the z = 0 great
/// circle +y wins, then +x.
template <typename Scalar>
Vector3<Scalar> orient_normal(Vector3<Scalar> n) {
  for (int axis : {2, 1, 0}) {
    if (n[axis] > Scalar(0)) return n;
    if (n[axis] < Scalar(0)) return -n;
  }
  return n;
}

/// Unit normal of the least-squares plane through `points` (eigenvector of the
/// covariance with the smallest eigenvalue), sign fixed by orient_normal.
/// Throws for fewer than three points or (near-)collinear input.
template <typename Scalar>
Vector3<Scalar> estimate_normal_pca(std::span<const Vector3<Scalar>> points) {
  if (points.size() < 3) throw Error("estimate_normal_pca: need at least 3 points");
  Vector3<Scalar> mean = Vector3<Scalar>::Zero();
  for (const auto& p : points) mean += p;
  mean /= Scalar(points.size());
  Matrix3<Scalar> cov = Matrix3<Scalar>::Zero();
  for (const auto& p : points) {
    const Vector3<Scalar> d = p - mean;
    cov.noalias() += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Matrix3<Scalar>> solver(cov);
  const Vector3<Scalar> ev = solver.eigenvalues();
  if (!(ev[2] > Scalar(0)) || ev[1] <= ev[2] * Scalar(1e-12))
    throw Error("estimate_normal_pca: degenerate (collinear or coincident) points");
  Vector3<Scalar> n = solver.eigenvectors().col(0).normalized();
  return orient_normal<Scalar>(n);
}

template <typename Scalar>
Vector3<Scalar> estimate_normal_pca(const std::vector<Vector3<Scalar>>& points) {
  return estimate_normal_pca<Scalar>(std::span<const Vector3<Scalar>>(points));
}

/// Right-handed tangent frame (e1, e2) with e1 x e2 = n. e1 is the coordinate
/// axis least aligned with n, projected onto the tangent plane (ties go to the
/// lower axis).
template <typename Scalar>
std::pair<Vector3<Scalar>, Vector3<Scalar>> tangent_basis(const Vector3<Scalar>& n) {
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(n[i]) < std::abs(n[axis])) axis = i;
  Vector3<Scalar> a = Vector3<Scalar>::Unit(axis);
  Vector3<Scalar> e1 = (a - a.dot(n) * n).normalized();
  Vector3<Scalar> e2 = n.cross(e1);
  return {e1, e2};
}

}  // namespace dse
