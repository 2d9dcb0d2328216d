#include "dse/dataset.hpp"

#include "binary.hpp"
#include "dse/knn.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>

namespace dse {
namespace {
constexpr char kMagic[8] = {'D', 'S', 'E', 'P', 'A', 'T', 'C', 'H'};
}

void PatchDataset::validate() const {
  if (k == 0 || k > K) throw Error("dataset: need 0 < k <= K");
  for (const auto& r : records) {
    if (r.ids.size() != K || r.positions.size() != K || r.distances.size() != K || r.member.size() != K)
      throw Error("dataset: record does not hold K candidates");
    std::size_t ones = 0;
    for (auto f : r.member) {
      if (f > 1) throw Error("dataset: member flag must be 0 or 1");
      ones += f;
    }
    if (ones != k) throw Error("dataset: record must flag exactly k members");
    if (r.coords.size() != k) throw Error("dataset: record must hold k log map coordinates");
  }
}

std::string encode_dataset(const PatchDataset& data) {
  data.validate();
  binary::Writer w;
  w.put_bytes(kMagic, 8);
  w.put<std::uint32_t>(PatchDataset::kVersion);
  w.put<std::uint32_t>(data.K);
  w.put<std::uint32_t>(data.k);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(data.records.size()));
  for (const auto& r : data.records) {
    w.put<std::uint32_t>(r.center_id);
    for (int c = 0; c < 3; ++c) w.put<float>(r.center[c]);
    for (auto id : r.ids) w.put<std::uint32_t>(id);
    for (const auto& p : r.positions)
      for (int c = 0; c < 3; ++c) w.put<float>(p[c]);
    for (float d : r.distances) w.put<float>(d);
    for (auto f : r.member) w.put<std::uint8_t>(f);
    for (const auto& u : r.coords) {
      w.put<float>(u.x());
      w.put<float>(u.y());
    }
  }
  return w.bytes();
}

PatchDataset decode_dataset(const std::string& bytes) {
  binary::Reader r(bytes, "dataset file");
  if (r.get_bytes(8) != std::string(kMagic, 8)) throw Error("dataset file: bad magic");
  if (r.get<std::uint32_t>() != PatchDataset::kVersion) throw Error("dataset file: unsupported version");
  PatchDataset data;
  data.K = r.get<std::uint32_t>();
  data.k = r.get<std::uint32_t>();
  const auto count = r.get<std::uint32_t>();
  if (data.k == 0 || data.k > data.K) throw Error("dataset file: need 0 < k <= K");
  const std::size_t record_bytes = 4 + 12 + static_cast<std::size_t>(data.K) * (4 + 12 + 4 + 1) + data.k * 8ull;
  if (r.remaining() != record_bytes * count) throw Error("dataset file: size mismatch with header record count");
  data.records.resize(count);
  for (auto& rec : data.records) {
    rec.center_id = r.get<std::uint32_t>();
    for (int c = 0; c < 3; ++c) rec.center[c] = r.get<float>();
    rec.ids.resize(data.K);
    for (auto& id : rec.ids) id = r.get<std::uint32_t>();
    rec.positions.resize(data.K);
    for (auto& p : rec.positions)
      for (int c = 0; c < 3; ++c) p[c] = r.get<float>();
    rec.distances.resize(data.K);
    for (auto& d : rec.distances) d = r.get<float>();
    rec.member.resize(data.K);
    for (auto& f : rec.member) f = r.get<std::uint8_t>();
    rec.coords.resize(data.k);
    for (auto& u : rec.coords) {
      u.x() = r.get<float>();
      u.y() = r.get<float>();
    }
  }
  data.validate();
  return data;
}

PatchDataset read_dataset(const std::filesystem::path& path) { return decode_dataset(binary::slurp(path)); }

void write_dataset(const std::filesystem::path& path, const PatchDataset& data) {
  binary::dump(path, encode_dataset(data));
}

PatchDataset generate_dataset(const ReferenceSurface& surface, int K, int k, std::size_t patches, std::uint64_t seed,
                              GenerationStats* stats) {
  if (k < 1 || K < k) throw Error("generate_dataset: need 1 <= k <= K");
  const Index n = surface.size();
  if (K > n - 1) throw Error("generate_dataset: K exceeds the number of other vertices");
  PatchDataset data;
  data.K = static_cast<std::uint32_t>(K);
  data.k = static_cast<std::uint32_t>(k);
  const KnnIndex index(surface.mesh().vertices);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(std::min(order.size(), patches));

  GenerationStats local;
  for (Index center : order) {
    ++local.attempted;
    GroundTruthLogMap gt;
    try {
      gt = gt_logmap(surface, center, k);
    } catch (const Error&) {
      ++local.skipped;
      continue;
    }
    gt.ids.resize(static_cast<std::size_t>(k));
    gt.coords.resize(static_cast<std::size_t>(k));
    std::unordered_map<Index, std::size_t> slot;
    for (std::size_t j = 0; j < gt.ids.size(); ++j) slot.emplace(gt.ids[j], j);

    const auto cand = index.knn(center, K);
    PatchRecord rec;
    rec.center_id = static_cast<std::uint32_t>(center);
    rec.center = surface.position(center).cast<float>();
    std::size_t found = 0;
    for (const auto& c : cand) {
      rec.ids.push_back(static_cast<std::uint32_t>(c.id));
      rec.positions.push_back(surface.position(c.id).cast<float>());
      rec.distances.push_back(static_cast<float>(c.distance));
      auto it = slot.find(c.id);
      rec.member.push_back(it != slot.end() ? 1 : 0);
      if (it != slot.end()) {
        rec.coords.push_back(gt.coords[it->second].cast<float>());
        ++found;
      }
    }
    if (found != static_cast<std::size_t>(k)) {
      ++local.skipped;
      continue;
    }
    data.records.push_back(std::move(rec));
  }
  if (stats) *stats = local;
  return data;
}

}  // namespace dse
