#include "dse/dataset.hpp"
#include "dse/io.hpp"
#include "dse/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace dse;

struct ReconstructArgs {
  int k = 30;
  int K = 120;
  std::string estimator = "rotation";
  std::string neighborhood = "heuristic";
  std::string classifier_path;
  std::string projector_path;
  bool no_align = false;
  bool no_select = false;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string report;
};

void add_pipeline_flags(CLI::App* cmd, ReconstructArgs& a) {
  cmd->add_option("--k", a.k, "Geodesic neighbours per patch")->check(CLI::PositiveNumber);
  cmd->add_option("--K", a.K, "Euclidean candidates per patch")->check(CLI::PositiveNumber);
  cmd->add_option("--estimator", a.estimator, "Log map estimator")
      ->check(CLI::IsMember({"projection", "rotation", "neural"}));
  cmd->add_option("--neighborhood", a.neighborhood, "Geodesic neighbourhood selection")
      ->check(CLI::IsMember({"heuristic", "neural", "euclidean"}));
  cmd->add_option("--classifier-weights", a.classifier_path, "Classifier weight file")->check(CLI::ExistingFile);
  cmd->add_option("--projector-weights", a.projector_path, "Projector weight file")->check(CLI::ExistingFile);
  cmd->add_flag("--no-align", a.no_align, "Skip log map synchronization");
  cmd->add_flag("--no-select", a.no_select, "Keep every candidate triangle");
  cmd->add_option("--seed", a.seed, "Random seed");
  cmd->add_option("--workers", a.workers, "Worker threads")->check(CLI::PositiveNumber);
}

PipelineConfig to_config(const ReconstructArgs& a) {
  PipelineConfig c;
  c.k = a.k;
  c.K = a.K;
  c.estimator = parse_estimator(a.estimator);
  c.neighborhood = parse_neighborhood(a.neighborhood);
  c.align = !a.no_align;
  c.select = !a.no_select;
  c.seed = a.seed;
  c.workers = a.workers;
  c.sync.workers = a.workers;
  return c;
}

struct LoadedNetworks {
  std::optional<NetworkWeights> classifier, projector;
  Networks view() const { return {classifier ? &*classifier : nullptr, projector ? &*projector : nullptr}; }
};

LoadedNetworks load_networks(const ReconstructArgs& a) {
  LoadedNetworks n;
  if (!a.classifier_path.empty()) n.classifier = io::read_weights(a.classifier_path);
  if (!a.projector_path.empty()) n.projector = io::read_weights(a.projector_path);
  return n;
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

io::Fields config_fields(const PipelineConfig& c, const ReconstructArgs& a) {
  io::Fields f{{"k", std::to_string(c.k)},
               {"K", std::to_string(c.K)},
               {"estimator", std::string(to_string(c.estimator))},
               {"neighborhood", std::string(to_string(c.neighborhood))},
               {"align", c.align ? "true" : "false"},
               {"select", c.select ? "true" : "false"},
               {"seed", std::to_string(c.seed)},
               {"workers", std::to_string(c.workers)},
               {"graph_degree", std::to_string(c.graph_degree)},
               {"sync_eps_factor", fmt(c.sync.eps_factor)},
               {"sync_min_pts", std::to_string(c.sync.min_pts)}};
  if (!a.classifier_path.empty()) f.emplace_back("classifier_weights", a.classifier_path);
  if (!a.projector_path.empty()) f.emplace_back("projector_weights", a.projector_path);
  return f;
}

io::Fields diagnostic_fields(const Diagnostics& d) {
  io::Fields f{{"K_used", std::to_string(d.K_used)},
               {"candidates", std::to_string(d.candidates)},
               {"count3_candidates", std::to_string(d.count3_candidates)},
               {"degenerate_candidates", std::to_string(d.degenerate_candidates)},
               {"count3_fraction", fmt(d.count3_fraction)},
               {"fallback_patches", std::to_string(d.fallback_patches)},
               {"failed_patches", std::to_string(d.failed_patches)},
               {"boundary_dses", std::to_string(d.boundary_dses)},
               {"seconds_neighborhood", fmt(d.seconds_neighborhood)},
               {"seconds_logmap", fmt(d.seconds_logmap)},
               {"seconds_align", fmt(d.seconds_align)},
               {"seconds_triangulate", fmt(d.seconds_triangulate)},
               {"seconds_select", fmt(d.seconds_select)}};
  for (std::size_t i = 0; i < d.warnings.size(); ++i) f.emplace_back("warning." + std::to_string(i), d.warnings[i]);
  return f;
}

int run_reconstruct(const std::string& in, const std::string& out, const ReconstructArgs& a, bool mark) {
  const PipelineConfig config = to_config(a);
  const LoadedNetworks nets = load_networks(a);
  const PointCloud cloud = io::read_point_cloud(in);
  const Reconstruction rec = reconstruct(cloud, config, nets.view());
  for (const auto& w : rec.diagnostics.warnings) std::cerr << "warning: " << w << "\n";
  io::write_mesh(out, rec.mesh, io::MeshFormat::detect, mark);
  io::Fields cfg{{"input", in}, {"output", out}};
  for (auto& f : config_fields(config, a)) cfg.push_back(std::move(f));
  if (!a.report.empty()) io::write_report(a.report, rec.report, cfg, diagnostic_fields(rec.diagnostics));
  std::cout << "wrote " << out << ": " << rec.mesh.vertex_count() << " vertices, " << rec.mesh.triangle_count()
            << " triangles, nw_percent=" << fmt(rec.report.nw_percent) << "\n";
  return 0;
}

int run_eval(const std::string& mesh_path, const std::string& ref_path, std::size_t samples, std::uint64_t seed,
             const std::string& report) {
  const TriangleMesh mesh = io::read_mesh(mesh_path);
  const TriangleMesh reference = io::read_mesh(ref_path);
  const MeshReport r = evaluate(mesh, reference, samples, seed);
  const io::Fields cfg{{"mesh", mesh_path}, {"reference", ref_path}, {"samples", std::to_string(samples)},
                       {"seed", std::to_string(seed)}};
  if (!report.empty()) io::write_report(report, r, cfg);
  std::cout << io::format_report(r, cfg);
  return 0;
}

int run_gen_data(const std::string& mesh_path, const std::string& out, int k, int K, std::size_t patches,
                 std::uint64_t seed) {
  const ReferenceSurface surface(io::read_mesh(mesh_path));
  GenerationStats stats;
  const PatchDataset data = generate_dataset(surface, K, k, patches, seed, &stats);
  write_dataset(out, data);
  std::cout << "wrote " << out << ": " << data.records.size() << " patches (" << stats.skipped
            << " skipped: ground truth outside the candidates)\n";
  return 0;
}

// "k=20,30,50" -> ("k", {20, 30, 50})
std::pair<std::string, std::vector<int>> parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--grid", "expected name=v1,v2,... got '" + text + "'");
  const std::string name = text.substr(0, eq);
  if (name != "k" && name != "K") throw CLI::ValidationError("--grid", "unknown grid axis '" + name + "'");
  std::vector<int> values;
  std::stringstream ss(text.substr(eq + 1));
  for (std::string item; std::getline(ss, item, ',');) {
    int v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size() || v <= 0)
      throw CLI::ValidationError("--grid", "bad value '" + item + "' for " + name);
    values.push_back(v);
  }
  if (values.empty()) throw CLI::ValidationError("--grid", "empty value list for " + name);
  return {name, values};
}

int run_sweep(const std::string& in, const std::vector<std::string>& grid, const ReconstructArgs& a,
              const std::string& reference_path, std::size_t samples) {
  std::map<std::string, std::vector<int>> axes{{"k", {a.k}}, {"K", {a.K}}};
  for (const auto& text : grid) {
    auto [name, values] = parse_axis(text);
    axes[name] = std::move(values);
  }
  const PipelineConfig base = to_config(a);
  std::vector<PipelineConfig> configs;
  for (int K : axes["K"])
    for (int k : axes["k"]) {
      PipelineConfig c = base;
      c.K = K;
      c.k = k;
      configs.push_back(c);
    }
  const LoadedNetworks nets = load_networks(a);
  const PointCloud cloud = io::read_point_cloud(in);
  std::optional<TriangleMesh> reference;
  if (!reference_path.empty()) reference = io::read_mesh(reference_path);
  const SweepResult result = sweep(cloud, configs, nets.view(), reference ? &*reference : nullptr, samples);

  std::cout << "K\tk\tnw_percent\tangle_stddev_deg\tchamfer\tnormal_error_deg\ttriangles\tseconds\n";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : result.rows) {
    const auto& d = row.diagnostics;
    const double seconds =
        d.seconds_neighborhood + d.seconds_logmap + d.seconds_align + d.seconds_triangulate + d.seconds_select;
    std::cout << row.config.K << '\t' << row.config.k << '\t' << fmt(row.report.nw_percent) << '\t'
              << fmt(row.report.angle_stddev_deg) << '\t' << (row.report.chamfer ? fmt(*row.report.chamfer) : "-")
              << '\t' << (row.report.normal_error_deg ? fmt(*row.report.normal_error_deg) : "-") << '\t'
              << row.report.triangles << '\t' << fmt(seconds) << "\n";
    io::Fields cfg{{"input", in}};
    for (auto& f : config_fields(row.config, a)) cfg.push_back(std::move(f));
    rows.push_back(nlohmann::ordered_json::parse(io::report_json(row.report, cfg, diagnostic_fields(d))));
  }
  for (const auto& e : result.errors)
    std::cerr << "error: K=" << e.config.K << " k=" << e.config.k << ": " << e.message << "\n";
  if (!a.report.empty()) {
    nlohmann::ordered_json doc;
    doc["rows"] = rows;
    doc["errors"] = nlohmann::ordered_json::array();
    for (const auto& e : result.errors)
      doc["errors"].push_back({{"K", e.config.K}, {"k", e.config.k}, {"message", e.message}});
    std::ofstream(a.report) << doc.dump(2) << "\n";
  }
  return result.rows.empty() ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point cloud triangulation from Delaunay surface elements", "dse"};
  app.require_subcommand(1);

  ReconstructArgs rargs;
  std::string rin, rout;
  bool mark = false;
  auto* rec = app.add_subcommand("reconstruct", "Triangulate a point cloud");
  rec->add_option("input", rin, "Point cloud (.xyz, .ply, .obj)")->required();
  rec->add_option("output", rout, "Output mesh (.obj, .ply)")->required();
  add_pipeline_flags(rec, rargs);
  rec->add_option("--report", rargs.report, "Write a metrics report (text, plus .json)");
  rec->add_flag("--mark-nonmanifold", mark, "Flag faces on edges without exactly two faces");

  std::string emesh, eref, ereport;
  std::size_t esamples = 100000;
  std::uint64_t eseed = 1;
  auto* ev = app.add_subcommand("eval", "Compare a mesh with a reference mesh");
  ev->add_option("mesh", emesh, "Mesh to evaluate")->required();
  ev->add_option("reference", eref, "Reference mesh")->required();
  ev->add_option("--samples", esamples, "Surface samples per mesh for Chamfer distance")->check(CLI::PositiveNumber);
  ev->add_option("--seed", eseed, "Sampling seed");
  ev->add_option("--report", ereport, "Write the report to a file (text, plus .json)");

  std::string gmesh, gout;
  int gk = 30, gK = 120;
  std::size_t gpatches = 1000;
  std::uint64_t gseed = 1;
  auto* gen = app.add_subcommand("gen-data", "Export supervised patches from a reference mesh");
  gen->add_option("reference", gmesh, "Reference mesh")->required();
  gen->add_option("output", gout, "Output dataset (.dsepatch)")->required();
  gen->add_option("--k", gk, "Geodesic neighbours per patch")->check(CLI::PositiveNumber);
  gen->add_option("--K", gK, "Euclidean candidates per patch")->check(CLI::PositiveNumber);
  gen->add_option("--per-shape-patches", gpatches, "Patches to sample")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gseed, "Random seed");

  ReconstructArgs sargs;
  std::string sin, sref;
  std::vector<std::string> grid;
  std::size_t ssamples = 100000;
  auto* sw = app.add_subcommand("sweep", "Reconstruct over a grid of k and K");
  sw->add_option("input", sin, "Point cloud")->required();
  sw->add_option("--grid", grid, "Axes such as k=20,30,50 K=80,120,160")->expected(1, 2);
  add_pipeline_flags(sw, sargs);
  sw->add_option("--reference", sref, "Reference mesh for Chamfer and normal error")->check(CLI::ExistingFile);
  sw->add_option("--samples", ssamples, "Surface samples for Chamfer distance")->check(CLI::PositiveNumber);
  sw->add_option("--report", sargs.report, "Write all rows as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    const auto parsed = app.get_subcommands();
    std::cerr << (parsed.empty() ? app.help() : parsed.front()->help());
    return 1;
  }

  try {
    if (*rec) return run_reconstruct(rin, rout, rargs, mark);
    if (*ev) return run_eval(emesh, eref, esamples, eseed, ereport);
    if (*gen) return run_gen_data(gmesh, gout, gk, gK, gpatches, gseed);
    if (*sw) return run_sweep(sin, grid, sargs, sref, ssamples);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n" << sw->help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
