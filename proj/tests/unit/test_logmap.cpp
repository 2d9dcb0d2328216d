#include "dse/geodesic.hpp"
#include "dse/logmap.hpp"
#include "dse/network.hpp"
#include "dse/normals.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dse;

namespace {

GeodesicPatch make_patch(const Vec3& center, const std::vector<Vec3>& pts) {
  GeodesicPatch p;
  p.center = 0;
  p.center_position = center;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    p.members.push_back(static_cast<Index>(i + 1));
    p.offsets.push_back(pts[i] - center);
    p.distances.push_back(p.offsets.back().norm());
  }
  return p;
}

}  // namespace

TEST_CASE("estimator names round-trip") {
  for (auto e : {Estimator::projection, Estimator::rotation, Estimator::neural})
    CHECK(parse_estimator(to_string(e)) == e);
  CHECK_THROWS_AS(parse_estimator("isomap"), Error);
}

TEST_CASE("tangent basis is right-handed and orthonormal") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int i = 0; i < 50; ++i) {
    const Vec3 n = Vec3(g(rng), g(rng), g(rng)).normalized();
    const auto [e1, e2] = tangent_basis<double>(n);
    CHECK(std::abs(e1.dot(n)) < 1e-12);
    CHECK(std::abs(e1.dot(e2)) < 1e-12);
    CHECK(e1.norm() == doctest::Approx(1.0));
    CHECK((e1.cross(e2) - n).norm() < 1e-12);
  }
}

TEST_CASE("on a plane both estimators reproduce the tangent coordinates exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Vec3 n = Vec3(0.3, -0.4, 1.0).normalized();
  const auto [e1, e2] = tangent_basis<double>(n);
  const Vec3 c(1, 2, 3);
  std::vector<Vec3> pts;
  std::vector<Vec2> expected;
  for (int i = 0; i < 30; ++i) {
    const Vec2 t(u(rng), u(rng));
    expected.push_back(t);
    pts.push_back(c + t.x() * e1 + t.y() * e2);
  }
  const auto patch = make_patch(c, pts);
  for (const auto& map : {estimate_projection(patch), estimate_rotation(patch)}) {
    REQUIRE(map.coords.size() == 30);
    CHECK(map.center == 0);
    CHECK(map.members == patch.members);
    // PCA recovers n up to sign; the sign is fixed to +z, which matches n here.
    for (std::size_t j = 0; j < 30; ++j) CHECK((map.coords[j] - expected[j]).norm() < 1e-10);
  }
}

TEST_CASE("rotation keeps Euclidean radii, projection shrinks them on a sphere") {
  const Vec3 c(0, 0, 1);
  std::vector<Vec3> pts;
  for (int i = 0; i < 24; ++i) {
    const double t = 0.2 + 0.02 * (i % 5), a = 0.7 * i;
    pts.emplace_back(std::sin(t) * std::cos(a), std::sin(t) * std::sin(a), std::cos(t));
  }
  const auto patch = make_patch(c, pts);
  const auto rot = estimate_rotation(patch, Vec3::UnitZ());
  const auto proj = estimate_projection(patch, Vec3::UnitZ());
  const auto sphere = AnalyticSurface::sphere();
  for (std::size_t j = 0; j < pts.size(); ++j) {
    CHECK(rot.coords[j].norm() == doctest::Approx((pts[j] - c).norm()));
    CHECK(proj.coords[j].norm() < rot.coords[j].norm());
    // Same direction as the exact log map, since the frame is tangent_basis(+z).
    const Vec2 exact = analytic_logmap(sphere, c, pts[j]);
    CHECK(rot.coords[j].normalized().dot(exact.normalized()) == doctest::Approx(1.0));
    CHECK(rot.coords[j].norm() < exact.norm());
  }
}

TEST_CASE("rotation: a member on the normal line is degenerate") {
  const auto patch = make_patch(Vec3::Zero(), {{1, 0, 0}, {0, 1, 0}, {0, 0, 0.5}});
  const auto map = estimate_rotation(patch, Vec3::UnitZ());
  CHECK(map.degenerate == 1);
  CHECK(map.coords[2].x() == doctest::Approx(0.5));
  CHECK(map.coords[2].y() == 0.0);
}

TEST_CASE("PCA normal rejects collinear patches") {
  const auto patch = make_patch(Vec3::Zero(), {{1, 0, 0}, {2, 0, 0}, {3, 0, 0}});
  CHECK_THROWS_AS(estimate_projection(patch), Error);
}

TEST_CASE("neural estimator: a projector reading x and y gives planar coordinates") {
  NetworkWeights net = NetworkWeights::zeros(NetworkKind::projector, {{LayerKind::linear, 4, 2},
                                                                      {LayerKind::global_maxpool, 2, 2},
                                                                      {LayerKind::concat_global, 2, 6},
                                                                      {LayerKind::linear, 6, 2}});
  net.weights[1](0, 0) = 1.0;
  net.weights[1](1, 1) = 1.0;
  net.biases[1] << 0.25, -0.5;  // cancelled by recentering on the center row
  const auto patch = make_patch(Vec3(5, 5, 5), {{6, 5, 5}, {5, 7, 5}, {3, 4, 5}});
  const auto map = estimate_neural(patch, net);
  REQUIRE(map.coords.size() == 3);
  CHECK((map.coords[0] - Vec2(1, 0)).norm() < 1e-12);
  CHECK((map.coords[1] - Vec2(0, 2)).norm() < 1e-12);
  CHECK((map.coords[2] - Vec2(-2, -1)).norm() < 1e-12);
  CHECK(map.estimator == Estimator::neural);

  const auto classifier = NetworkWeights::zeros(NetworkKind::classifier, {{LayerKind::linear, 4, 1},
                                                                          {LayerKind::global_maxpool, 1, 1},
                                                                          {LayerKind::concat_global, 1, 5},
                                                                          {LayerKind::linear, 5, 1}});
  CHECK_THROWS_AS(estimate_neural(patch, classifier), Error);
}
