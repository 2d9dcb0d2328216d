#pragma once

#include "dse/metrics.hpp"
#include "dse/network.hpp"
#include "dse/types.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace dse::io {

enum class CloudFormat { detect, xyz, ply, obj };
enum class MeshFormat { detect, obj, ply };

/// Reads positions and, when present, normals. PLY may be ascii or
/// binary_little_endian. Parse errors carry the offending line number.
PointCloud read_point_cloud(const std::filesystem::path& path, CloudFormat format = CloudFormat::detect);

/// OBJ or PLY triangle mesh; polygons are fan-triangulated.
TriangleMesh read_mesh(const std::filesystem::path& path, MeshFormat format = MeshFormat::detect);

/// Writes OBJ (1-indexed faces) or ascii PLY. With `mark_nonmanifold`,
/// faces touching an edge with other than two incident faces are flagged:
/// red per-face color in PLY, a separate material (plus .mtl file) in OBJ.
void write_mesh(const std::filesystem::path& path, const TriangleMesh& mesh, MeshFormat format = MeshFormat::detect,
                bool mark_nonmanifold = false);

/// Faces that touch an edge whose incidence is not 2.
std::vector<bool> flagged_faces(const TriangleMesh& mesh);

NetworkWeights read_weights(const std::filesystem::path& path);
void write_weights(const std::filesystem::path& path, const NetworkWeights& net);
NetworkWeights decode_weights(const std::string& bytes);
std::string encode_weights(const NetworkWeights& net);

/// Ordered key/value pairs echoed into reports.
using Fields = std::vector<std::pair<std::string, std::string>>;

/// Line-oriented `key=value` text. Histogram bins are written as one
/// comma-separated list.
std::string format_report(const MeshReport& report, const Fields& config = {}, const Fields& diagnostics = {});
std::string report_json(const MeshReport& report, const Fields& config = {}, const Fields& diagnostics = {});

/// Writes the text report to `path` and the JSON form to `path` + ".json".
void write_report(const std::filesystem::path& path, const MeshReport& report, const Fields& config = {},
                  const Fields& diagnostics = {});

}  // namespace dse::io
