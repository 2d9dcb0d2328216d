#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dse {

using Index = std::int32_t;

template <typename Scalar> using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar> using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar> using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

using Vec2 = Vector2<double>;
using Vec3 = Vector3<double>;

/// Sorted vertex triple; also used for unsorted (oriented) faces.
using Triangle = std::array<Index, 3>;

/// Precondition violations and malformed inputs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input samples. `ids[i] == i` always; normals are optional and unit length.
struct PointCloud {
  std::vector<Vec3> positions;
  std::vector<Vec3> normals;

  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> pts, std::vector<Vec3> nrm = {});

  Index size() const { return static_cast<Index>(positions.size()); }
  bool has_normals() const { return !normals.empty(); }
  bool empty() const { return positions.empty(); }
};

/// Output mesh over a subset of an input cloud. `vertex_ids[v]` is the cloud id
/// of local vertex v, and `triangles` index local vertices.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Index> vertex_ids;
  std::vector<Triangle> triangles;

  Index vertex_count() const { return static_cast<Index>(vertices.size()); }
  Index triangle_count() const { return static_cast<Index>(triangles.size()); }
  bool empty() const { return triangles.empty(); }
};

}  // namespace dse
