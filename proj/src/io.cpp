#include "dse/io.hpp"

#include "binary.hpp"
#include "dse/mesh.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace dse::io {
namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

[[noreturn]] void parse_error(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  throw Error(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> to_integer(std::string_view s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::ifstream open_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

Vec3 unit_normal(const Vec3& n, const std::filesystem::path& path, std::size_t line) {
  const double len = n.norm();
  if (!(len > 0.0)) parse_error(path, line, "zero-length normal");
  return n / len;
}

PointCloud read_xyz(const std::filesystem::path& path) {
  std::ifstream in = open_text(path);
  std::vector<Vec3> pts, nrm;
  std::string line;
  std::size_t lineno = 0;
  int width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = split(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    if (tok.size() != 3 && tok.size() != 6) parse_error(path, lineno, "expected 3 or 6 numbers");
    if (width == 0) width = static_cast<int>(tok.size());
    if (static_cast<int>(tok.size()) != width) parse_error(path, lineno, "inconsistent column count");
    double v[6];
    for (std::size_t i = 0; i < tok.size(); ++i) {
      auto d = to_double(tok[i]);
      if (!d) parse_error(path, lineno, "malformed number '" + std::string(tok[i]) + "'");
      v[i] = *d;
    }
    pts.emplace_back(v[0], v[1], v[2]);
    if (width == 6) nrm.push_back(unit_normal(Vec3(v[3], v[4], v[5]), path, lineno));
  }
  return PointCloud(std::move(pts), std::move(nrm));
}

struct ObjData {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
};

ObjData read_obj(const std::filesystem::path& path, bool faces) {
  std::ifstream in = open_text(path);
  ObjData out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = split(line);
    if (tok.empty()) continue;
    if (tok[0] == "v") {
      if (tok.size() < 4) parse_error(path, lineno, "vertex needs 3 coordinates");
      double v[3];
      for (int i = 0; i < 3; ++i) {
        auto d = to_double(tok[i + 1]);
        if (!d) parse_error(path, lineno, "malformed number '" + std::string(tok[i + 1]) + "'");
        v[i] = *d;
      }
      out.vertices.emplace_back(v[0], v[1], v[2]);
    } else if (tok[0] == "f" && faces) {
      if (tok.size() < 4) parse_error(path, lineno, "face needs at least 3 vertices");
      std::vector<Index> poly;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const std::string_view ref = tok[i].substr(0, tok[i].find('/'));
        auto idx = to_integer(ref);
        if (!idx || *idx == 0) parse_error(path, lineno, "malformed face index '" + std::string(tok[i]) + "'");
        const long long n = static_cast<long long>(out.vertices.size());
        const long long resolved = *idx > 0 ? *idx - 1 : n + *idx;
        if (resolved < 0 || resolved >= n) parse_error(path, lineno, "face index out of range");
        poly.push_back(static_cast<Index>(resolved));
      }
      for (std::size_t i = 1; i + 1 < poly.size(); ++i) out.triangles.push_back({poly[0], poly[i], poly[i + 1]});
    }
  }
  return out;
}

// PLY ------------------------------------------------------------------------

enum class PlyType { i8, u8, i16, u16, i32, u32, f32, f64 };

PlyType ply_type(std::string_view name, const std::filesystem::path& path, std::size_t line) {
  if (name == "char" || name == "int8") return PlyType::i8;
  if (name == "uchar" || name == "uint8") return PlyType::u8;
  if (name == "short" || name == "int16") return PlyType::i16;
  if (name == "ushort" || name == "uint16") return PlyType::u16;
  if (name == "int" || name == "int32") return PlyType::i32;
  if (name == "uint" || name == "uint32") return PlyType::u32;
  if (name == "float" || name == "float32") return PlyType::f32;
  if (name == "double" || name == "float64") return PlyType::f64;
  parse_error(path, line, "unknown property type '" + std::string(name) + "'");
}

double read_binary(binary::Reader& r, PlyType t) {
  switch (t) {
    case PlyType::i8: return r.get<std::int8_t>();
    case PlyType::u8: return r.get<std::uint8_t>();
    case PlyType::i16: return r.get<std::int16_t>();
    case PlyType::u16: return r.get<std::uint16_t>();
    case PlyType::i32: return r.get<std::int32_t>();
    case PlyType::u32: return r.get<std::uint32_t>();
    case PlyType::f32: return r.get<float>();
    case PlyType::f64: return r.get<double>();
  }
  return 0.0;
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::f32;
  bool list = false;
  PlyType count_type = PlyType::u8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

struct PlyData {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<Triangle> triangles;
};

PlyData read_ply(const std::filesystem::path& path) {
  const std::string bytes = binary::slurp(path);
  std::size_t pos = 0, lineno = 0;
  auto next_line = [&]() -> std::optional<std::string_view> {
    if (pos >= bytes.size()) return std::nullopt;
    std::size_t end = bytes.find('\n', pos);
    if (end == std::string::npos) end = bytes.size();
    std::string_view line(bytes.data() + pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++lineno;
    return line;
  };

  auto magic = next_line();
  if (!magic || *magic != "ply") parse_error(path, 1, "missing 'ply' magic");
  bool ascii = true, have_format = false;
  std::vector<PlyElement> elements;
  for (;;) {
    auto line = next_line();
    if (!line) parse_error(path, lineno, "unterminated header");
    const auto tok = split(*line);
    if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "format") {
      if (tok.size() < 2) parse_error(path, lineno, "malformed format line");
      if (tok[1] == "ascii") ascii = true;
      else if (tok[1] == "binary_little_endian") ascii = false;
      else parse_error(path, lineno, "unsupported format '" + std::string(tok[1]) + "'");
      have_format = true;
    } else if (tok[0] == "element") {
      auto n = tok.size() == 3 ? to_integer(tok[2]) : std::nullopt;
      if (!n || *n < 0) parse_error(path, lineno, "malformed element line");
      elements.push_back({std::string(tok[1]), static_cast<std::size_t>(*n), {}});
    } else if (tok[0] == "property") {
      if (elements.empty()) parse_error(path, lineno, "property before element");
      PlyProperty p;
      if (tok.size() == 5 && tok[1] == "list") {
        p.list = true;
        p.count_type = ply_type(tok[2], path, lineno);
        p.type = ply_type(tok[3], path, lineno);
        p.name = tok[4];
      } else if (tok.size() == 3) {
        p.type = ply_type(tok[1], path, lineno);
        p.name = tok[2];
      } else {
        parse_error(path, lineno, "malformed property line");
      }
      elements.back().properties.push_back(p);
    } else {
      parse_error(path, lineno, "unexpected header keyword '" + std::string(tok[0]) + "'");
    }
  }
  if (!have_format) parse_error(path, lineno, "missing format line");

  PlyData out;
  std::optional<binary::Reader> reader;
  const std::string body = ascii ? std::string() : bytes.substr(pos);
  if (!ascii) reader.emplace(body, path.string());

  for (const auto& el : elements) {
    const bool is_vertex = el.name == "vertex";
    const bool is_face = el.name == "face";
    int ix[6] = {-1, -1, -1, -1, -1, -1};
    int face_list = -1;
    for (int p = 0; p < static_cast<int>(el.properties.size()); ++p) {
      static const char* names[6] = {"x", "y", "z", "nx", "ny", "nz"};
      for (int c = 0; c < 6; ++c)
        if (el.properties[p].name == names[c] && !el.properties[p].list) ix[c] = p;
      if (el.properties[p].list && (el.properties[p].name == "vertex_indices" || el.properties[p].name == "vertex_index"))
        face_list = p;
    }
    if (is_vertex && (ix[0] < 0 || ix[1] < 0 || ix[2] < 0)) parse_error(path, lineno, "vertex element lacks x/y/z");
    const bool has_normals = is_vertex && ix[3] >= 0 && ix[4] >= 0 && ix[5] >= 0;
    if (is_face && face_list < 0) parse_error(path, lineno, "face element lacks vertex_indices");

    for (std::size_t item = 0; item < el.count; ++item) {
      std::vector<double> scalars(el.properties.size(), 0.0);
      std::vector<long long> list;
      std::size_t where = lineno + 1;
      if (ascii) {
        auto line = next_line();
        while (line && split(*line).empty()) line = next_line();
        if (!line) parse_error(path, lineno, "unexpected end of file in element '" + el.name + "'");
        where = lineno;
        const auto tok = split(*line);
        std::size_t t = 0;
        for (std::size_t p = 0; p < el.properties.size(); ++p) {
          if (t >= tok.size()) parse_error(path, where, "too few values");
          if (el.properties[p].list) {
            auto n = to_integer(tok[t++]);
            if (!n || *n < 0) parse_error(path, where, "malformed list count");
            for (long long j = 0; j < *n; ++j) {
              if (t >= tok.size()) parse_error(path, where, "too few list values");
              auto v = to_integer(tok[t++]);
              if (!v) parse_error(path, where, "malformed list value");
              if (static_cast<int>(p) == face_list) list.push_back(*v);
            }
          } else {
            auto v = to_double(tok[t++]);
            if (!v) parse_error(path, where, "malformed number");
            scalars[p] = *v;
          }
        }
        if (t != tok.size()) parse_error(path, where, "too many values");
      } else {
        for (std::size_t p = 0; p < el.properties.size(); ++p) {
          if (el.properties[p].list) {
            const double n = read_binary(*reader, el.properties[p].count_type);
            if (n < 0) throw Error(path.string() + ": negative list count in element '" + el.name + "'");
            for (long long j = 0; j < static_cast<long long>(n); ++j) {
              const double v = read_binary(*reader, el.properties[p].type);
              if (static_cast<int>(p) == face_list) list.push_back(static_cast<long long>(v));
            }
          } else {
            scalars[p] = read_binary(*reader, el.properties[p].type);
          }
        }
      }
      if (is_vertex) {
        out.vertices.emplace_back(scalars[ix[0]], scalars[ix[1]], scalars[ix[2]]);
        if (has_normals) out.normals.push_back(unit_normal(Vec3(scalars[ix[3]], scalars[ix[4]], scalars[ix[5]]), path, where));
      } else if (is_face) {
        if (list.size() < 3) parse_error(path, where, "face with fewer than 3 vertices");
        for (long long v : list)
          if (v < 0 || v >= static_cast<long long>(out.vertices.size())) parse_error(path, where, "face index out of range");
        for (std::size_t j = 1; j + 1 < list.size(); ++j)
          out.triangles.push_back({static_cast<Index>(list[0]), static_cast<Index>(list[j]), static_cast<Index>(list[j + 1])});
      }
    }
  }
  if (reader && reader->remaining() != 0) throw Error(path.string() + ": trailing bytes after last element");
  return out;
}

CloudFormat detect_cloud(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".xyz" || ext == ".txt" || ext == ".pts") return CloudFormat::xyz;
  if (ext == ".ply") return CloudFormat::ply;
  if (ext == ".obj") return CloudFormat::obj;
  throw Error("cannot infer point cloud format of " + path.string());
}

MeshFormat detect_mesh(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".obj") return MeshFormat::obj;
  if (ext == ".ply") return MeshFormat::ply;
  throw Error("cannot infer mesh format of " + path.string());
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

PointCloud read_point_cloud(const std::filesystem::path& path, CloudFormat format) {
  if (!std::filesystem::exists(path)) throw Error("no such file: " + path.string());
  if (format == CloudFormat::detect) format = detect_cloud(path);
  switch (format) {
    case CloudFormat::xyz: return read_xyz(path);
    case CloudFormat::obj: return PointCloud(read_obj(path, false).vertices);
    case CloudFormat::ply: {
      PlyData d = read_ply(path);
      return PointCloud(std::move(d.vertices), std::move(d.normals));
    }
    case CloudFormat::detect: break;
  }
  throw Error("unsupported point cloud format");
}

TriangleMesh read_mesh(const std::filesystem::path& path, MeshFormat format) {
  if (!std::filesystem::exists(path)) throw Error("no such file: " + path.string());
  if (format == MeshFormat::detect) format = detect_mesh(path);
  if (format == MeshFormat::obj) {
    ObjData d = read_obj(path, true);
    return make_mesh(std::move(d.vertices), std::move(d.triangles));
  }
  PlyData d = read_ply(path);
  return make_mesh(std::move(d.vertices), std::move(d.triangles));
}

std::vector<bool> flagged_faces(const TriangleMesh& mesh) {
  const EdgeAdjacency adj = build_edge_adjacency(mesh);
  std::vector<bool> out(mesh.triangles.size(), false);
  for (const auto& [e, inc] : adj.incidence)
    if (inc.size() != 2)
      for (Index t : inc) out[t] = true;
  return out;
}

void write_mesh(const std::filesystem::path& path, const TriangleMesh& mesh, MeshFormat format, bool mark_nonmanifold) {
  validate_mesh(mesh);
  if (format == MeshFormat::detect) format = detect_mesh(path);
  const std::vector<bool> flags = mark_nonmanifold ? flagged_faces(mesh) : std::vector<bool>(mesh.triangles.size(), false);
  std::ostringstream os;
  if (format == MeshFormat::obj) {
    std::filesystem::path mtl = path;
    mtl.replace_extension(".mtl");
    if (mark_nonmanifold) os << "mtllib " << mtl.filename().string() << "\n";
    for (const Vec3& v : mesh.vertices)
      os << "v " << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z()) << "\n";
    int current = -1;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      if (mark_nonmanifold && current != static_cast<int>(flags[t])) {
        current = flags[t];
        os << "usemtl " << (flags[t] ? "flagged" : "surface") << "\n";
      }
      const Triangle& f = mesh.triangles[t];
      os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << "\n";
    }
    if (mark_nonmanifold)
      binary::dump(mtl, "newmtl surface\nKd 0.8 0.8 0.8\n\nnewmtl flagged\nKd 1 0 0\n");
  } else {
    os << "ply\nformat ascii 1.0\nelement vertex " << mesh.vertices.size()
       << "\nproperty double x\nproperty double y\nproperty double z\nelement face " << mesh.triangles.size()
       << "\nproperty list uchar int vertex_indices\n";
    if (mark_nonmanifold) os << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    os << "end_header\n";
    for (const Vec3& v : mesh.vertices)
      os << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z()) << "\n";
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const Triangle& f = mesh.triangles[t];
      os << "3 " << f[0] << ' ' << f[1] << ' ' << f[2];
      if (mark_nonmanifold) os << (flags[t] ? " 255 0 0" : " 200 200 200");
      os << "\n";
    }
  }
  binary::dump(path, os.str());
}

// Weights --------------------------------------------------------------------

namespace {
constexpr char kWeightMagic[8] = {'D', 'S', 'E', 'W', 'G', 'H', 'T', '\0'};
constexpr std::uint32_t kWeightVersion = 1;
}  // namespace

std::string encode_weights(const NetworkWeights& net) {
  net.validate();
  binary::Writer w;
  w.put_bytes(kWeightMagic, 8);
  w.put<std::uint32_t>(kWeightVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(net.kind));
  w.put<std::uint32_t>(net.normalization);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(net.layers.size()));
  for (const auto& l : net.layers) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(l.kind));
    w.put<std::uint32_t>(l.in);
    w.put<std::uint32_t>(l.out);
  }
  for (std::size_t i = 0; i < net.weights.size(); ++i) {
    const auto& W = net.weights[i];
    for (Eigen::Index r = 0; r < W.rows(); ++r)
      for (Eigen::Index c = 0; c < W.cols(); ++c) w.put<float>(static_cast<float>(W(r, c)));
    for (Eigen::Index r = 0; r < net.biases[i].size(); ++r) w.put<float>(static_cast<float>(net.biases[i](r)));
  }
  return w.bytes();
}

NetworkWeights decode_weights(const std::string& bytes) {
  binary::Reader r(bytes, "weight file");
  if (r.get_bytes(8) != std::string(kWeightMagic, 8)) throw Error("weight file: bad magic");
  if (r.get<std::uint32_t>() != kWeightVersion) throw Error("weight file: unsupported version");
  NetworkWeights net;
  const auto kind = r.get<std::uint32_t>();
  if (kind > 1) throw Error("weight file: unknown network kind");
  net.kind = static_cast<NetworkKind>(kind);
  net.normalization = r.get<std::uint32_t>();
  if (net.normalization != kNormalizationCenterUnitRadius) throw Error("weight file: normalization tag does not match featurization");
  const auto count = r.get<std::uint32_t>();
  r.need(static_cast<std::size_t>(count) * 12);
  std::size_t payload = 0;
  for (std::uint32_t i = 0; i < count; ++i) {
    LayerSpec l;
    const auto k = r.get<std::uint32_t>();
    if (k > 3) throw Error("weight file: unknown layer kind");
    l.kind = static_cast<LayerKind>(k);
    l.in = r.get<std::uint32_t>();
    l.out = r.get<std::uint32_t>();
    if (l.kind == LayerKind::linear) payload += (static_cast<std::size_t>(l.in) + 1) * l.out * sizeof(float);
    net.layers.push_back(l);
  }
  if (r.remaining() != payload)
    throw Error("weight file: size mismatch (payload " + std::to_string(r.remaining()) + " bytes, layers declare " +
                std::to_string(payload) + ")");
  for (const auto& l : net.layers) {
    if (l.kind != LayerKind::linear) continue;
    Eigen::MatrixXd W(l.out, l.in);
    Eigen::VectorXd b(l.out);
    for (Eigen::Index row = 0; row < W.rows(); ++row)
      for (Eigen::Index c = 0; c < W.cols(); ++c) W(row, c) = r.get<float>();
    for (Eigen::Index row = 0; row < b.size(); ++row) b(row) = r.get<float>();
    net.weights.push_back(std::move(W));
    net.biases.push_back(std::move(b));
  }
  net.validate();
  return net;
}

NetworkWeights read_weights(const std::filesystem::path& path) { return decode_weights(binary::slurp(path)); }

void write_weights(const std::filesystem::path& path, const NetworkWeights& net) {
  binary::dump(path, encode_weights(net));
}

// Reports --------------------------------------------------------------------

std::string format_report(const MeshReport& report, const Fields& config, const Fields& diagnostics) {
  std::ostringstream os;
  for (const auto& [k, v] : config) os << "config." << k << '=' << v << "\n";
  os << "nw_percent=" << format_double(report.nw_percent) << "\n";
  if (report.chamfer) os << "chamfer=" << format_double(*report.chamfer) << "\n";
  if (report.chamfer) os << "chamfer_samples=" << report.chamfer_samples << "\n";
  if (report.normal_error_deg) os << "normal_error_deg=" << format_double(*report.normal_error_deg) << "\n";
  if (report.normal_error_deg) os << "normal_excluded_vertices=" << report.normal_excluded << "\n";
  os << "angle_stddev_deg=" << format_double(report.angle_stddev_deg) << "\n";
  os << "vertices=" << report.vertices << "\n";
  os << "triangles=" << report.triangles << "\n";
  os << "edges=" << report.edges << "\n";
  os << "nonmanifold_edges=" << report.nonmanifold_edges << "\n";
  os << "degenerate_triangles=" << report.degenerate_triangles << "\n";
  os << "angle_histogram=";
  for (std::size_t i = 0; i < report.angle_histogram.size(); ++i) os << (i ? "," : "") << report.angle_histogram[i];
  os << "\n";
  for (const auto& [k, v] : diagnostics) os << "diagnostics." << k << '=' << v << "\n";
  return os.str();
}

std::string report_json(const MeshReport& report, const Fields& config, const Fields& diagnostics) {
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) j["config"][k] = v;
  j["nw_percent"] = report.nw_percent;
  j["chamfer"] = report.chamfer ? nlohmann::ordered_json(*report.chamfer) : nlohmann::ordered_json(nullptr);
  j["chamfer_samples"] = report.chamfer_samples;
  j["normal_error_deg"] =
      report.normal_error_deg ? nlohmann::ordered_json(*report.normal_error_deg) : nlohmann::ordered_json(nullptr);
  j["normal_excluded_vertices"] = report.normal_excluded;
  j["angle_stddev_deg"] = report.angle_stddev_deg;
  j["vertices"] = report.vertices;
  j["triangles"] = report.triangles;
  j["edges"] = report.edges;
  j["nonmanifold_edges"] = report.nonmanifold_edges;
  j["degenerate_triangles"] = report.degenerate_triangles;
  j["angle_histogram"] = report.angle_histogram;
  j["diagnostics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : diagnostics) j["diagnostics"][k] = v;
  return j.dump(2) + "\n";
}

void write_report(const std::filesystem::path& path, const MeshReport& report, const Fields& config,
                  const Fields& diagnostics) {
  binary::dump(path, format_report(report, config, diagnostics));
  binary::dump(path.string() + ".json", report_json(report, config, diagnostics));
}

}  // namespace dse::io
