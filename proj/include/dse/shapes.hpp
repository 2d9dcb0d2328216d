#pragma once

#include "dse/types.hpp"

#include <cstdint>

// Canonical test surfaces and point-cloud fixtures.
namespace dse::shapes {

/// Subdivided icosahedron on the unit sphere, outward oriented. Level 0 has
/// 12 vertices, level L has 10 * 4^L + 2.
TriangleMesh icosphere(int level);

/// Regular square grid on z = 0 with `nx` x `ny` vertices; each cell is split
/// along its (0,0)-(1,1) diagonal.
TriangleMesh grid_mesh(int nx, int ny, double spacing = 1.0);

/// Equilateral lattice on z = 0: `ny` rows of `nx` points, odd rows shifted by
/// half a spacing. Normals are +z.
PointCloud triangular_lattice(int nx, int ny, double spacing = 1.0);

/// Open cylinder about the z axis, `around` vertices per ring and `rings` rings
/// spanning z in [0, height].
TriangleMesh cylinder_mesh(double radius, double height, int around, int rings);

/// Random uniform samples on the unit sphere (with outward normals).
PointCloud sphere_samples(std::size_t n, std::uint64_t seed);

/// Random uniform samples on a box with half-extent `half` whose edges and
/// corners are rounded with radius `fillet` (a Minkowski sum of a cube of
/// half-extent `half - fillet` and a ball). Outward normals attached.
PointCloud rounded_box_samples(std::size_t n, double half, double fillet, std::uint64_t seed);

/// Reduces a dense sampling to `n` well-spread points by weighted sample
/// elimination (points with the most close neighbours go first). `area` is
/// the surface area the samples cover. Normals are carried along.
PointCloud eliminate_samples(const PointCloud& dense, std::size_t n, double area);

}  // namespace dse::shapes
