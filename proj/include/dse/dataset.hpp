#pragma once

#include "dse/geodesic.hpp"
#include "dse/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>

namespace dse {

/// One supervised patch: K Euclidean candidates around a center with
/// ground-truth geodesic membership and log map coordinates.
struct PatchRecord {
  std::uint32_t center_id = 0;
  Eigen::Vector3f center = Eigen::Vector3f::Zero();
  std::vector<std::uint32_t> ids;             // K, ascending Euclidean distance
  std::vector<Eigen::Vector3f> positions;     // K, absolute
  std::vector<float> distances;               // K
  std::vector<std::uint8_t> member;           // K flags, exactly k set
  std::vector<Eigen::Vector2f> coords;        // k, for flagged candidates in candidate order
};

struct PatchDataset {
  static constexpr std::uint32_t kVersion = 1;
  std::uint32_t K = 0;
  std::uint32_t k = 0;
  std::vector<PatchRecord> records;

  void validate() const;
};

PatchDataset read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, const PatchDataset& data);
PatchDataset decode_dataset(const std::string& bytes);
std::string encode_dataset(const PatchDataset& data);

struct GenerationStats {
  std::size_t attempted = 0;
  std::size_t skipped = 0;  // ground-truth members outside the Euclidean candidates
};

/// Samples `patches` centers (uniformly without replacement when possible)
/// on the reference surface and records their supervision. Centers whose k
/// graph-nearest vertices are not all among the K Euclidean candidates are
/// skipped.
PatchDataset generate_dataset(const ReferenceSurface& surface, int K, int k, std::size_t patches, std::uint64_t seed,
                              GenerationStats* stats = nullptr);

}  // namespace dse
