#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "gridplan/bench.hpp"
#include "gridplan/error.hpp"
#include "gridplan/graph.hpp"
#include "gridplan/infra_store.hpp"
#include "gridplan/net/bench_runner.hpp"
#include "gridplan/net/conformance.hpp"
#include "gridplan/net/service.hpp"
#include "gridplan/synthetic.hpp"

namespace {

using nlohmann::json;
using namespace gridplan;

int serve(const std::string& role, const std::string& config_path, int port) {
  net::ServiceConfig cfg;
  if (!config_path.empty()) {
    cfg = net::load_config(config_path);
  } else {
    net::apply_env(cfg, [](const char* n) { return std::getenv(n); });
  }
  if (!role.empty()) cfg.role = net::role_from_string(role);
  if (port >= 0) cfg.listen_port = port;
  cfg.validate();
  return net::run_service(cfg);
}

int conformance(const std::string& url, const std::string& golden_path, int timeout_s) {
  const auto golden = net::GoldenFile::load(golden_path);
  const auto report = net::run_conformance(url, golden, std::chrono::seconds(timeout_s));
  for (const auto& c : report.cases) {
    std::cout << "case " << c.index << ": " << (c.passed ? "PASS" : "FAIL") << '\n';
    for (const auto& d : c.diffs) std::cout << "  " << d << '\n';
  }
  std::cout << report.cases.size() - report.failures() << "/" << report.cases.size() << " cases passed\n";
  return report.passed() ? 0 : 1;
}

int golden(const std::string& url, const std::string& graph_ref, std::size_t count, std::uint64_t seed,
           const std::string& out) {
  net::wait_ready(url, std::chrono::seconds(60));
  const auto graph = net::load_graph_ref(graph_ref, url);
  const auto requests = net::random_requests(graph, count, seed);
  net::record_golden(url, requests).save(out);
  std::cout << "wrote " << count << " golden cases to " << out << '\n';
  return 0;
}

int bench_cmd(const std::string& endpoint, const std::string& spec_path, const std::string& out, bool paper_scale,
              const std::string& mode, std::size_t replicas) {
  bench::WorkloadSpec spec;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw Error(ErrorCode::kIoError, "cannot read workload spec " + spec_path);
    spec = bench::WorkloadSpec::from_json(json::parse(in));
  }
  if (paper_scale) spec.reps_per_cell = bench::kPaperRepsPerCell;
  std::optional<bench::Deployment> dep;
  if (!mode.empty()) dep = bench::Deployment{mode, replicas};
  const auto report = net::bench_to_dir(endpoint, spec, out, dep);
  std::cout << "cells: " << report.cells.size() << ", samples: " << spec.total_requests() << ", out: " << out << '\n';
  return 0;
}

int compare(const std::string& a, const std::string& b, const std::string& out) {
  const auto rows = net::compare_dirs(a, b, out);
  std::cout << "sources targets mean_a_ms mean_b_ms speedup\n";
  for (const auto& r : rows) {
    std::cout << r.sources << ' ' << r.targets << ' ' << r.mean_a_ms << ' ' << r.mean_b_ms << ' ' << r.speedup << '\n';
  }
  return 0;
}

int ingest_cmd(const std::string& bbox, const std::string& source, const std::string& store, bool railways,
               bool bridges) {
  const auto s = ingest(BoundingBox::parse(bbox), osm::parse_source(source), IngestOptions{railways, bridges});
  persist(s, store);
  std::cout << "stored " << s.towers().size() << " towers, " << s.power_lines().size() << " lines in " << store
            << '\n';
  return 0;
}

int build_graph_cmd(const std::string& store, const std::string& out, double penalty, double radius,
                    bool merge_bridges) {
  const auto s = load_store(store);
  const auto g = build_graph(s, GraphOptions{penalty, radius, merge_bridges});
  std::ofstream file(out, std::ios::trunc | std::ios::binary);
  if (!file) throw Error(ErrorCode::kIoError, "cannot write " + out);
  file << serialize_graph(g);
  std::cout << "graph: " << g.node_count() << " nodes, " << g.edge_count() << " edges -> " << out << '\n';
  return 0;
}

int synth_cmd(std::size_t towers, std::uint64_t seed, const std::string& bbox, const std::string& out) {
  SyntheticGridOptions o;
  o.towers = towers;
  o.seed = seed;
  if (!bbox.empty()) {
    const auto b = BoundingBox::parse(bbox);
    o.south = b.south();
    o.west = b.west();
    o.north = b.north();
    o.east = b.east();
  }
  std::ofstream file(out, std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIoError, "cannot write " + out);
  file << json{{"version", 0.6}, {"generator", "gridplan synth"}, {"elements", synthesize_power_elements(o)}}.dump()
       << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("gridplan"));
  if (const char* level = std::getenv("LOG_LEVEL")) spdlog::set_level(spdlog::level::from_str(level));

  CLI::App app{"UAV power-line inspection mission planner"};
  app.require_subcommand(1);

  std::string role, config;
  int port = -1;
  auto* serve_cmd = app.add_subcommand("serve", "Run one service role");
  serve_cmd->add_option("--role", role, "ingest | graph | pathfinder | solver | monolith");
  serve_cmd->add_option("--config", config, "JSON service config");
  serve_cmd->add_option("--port", port, "Override listen_port");

  std::string url, golden_path;
  int timeout_s = 60;
  auto* conf_cmd = app.add_subcommand("conformance", "Replay golden plans against a deployment");
  conf_cmd->add_option("--url", url, "Deployment base URL")->required();
  conf_cmd->add_option("--golden", golden_path, "Golden file")->required();
  conf_cmd->add_option("--timeout", timeout_s, "Readiness timeout in seconds");

  std::string graph_ref, out;
  std::size_t count = 20;
  std::uint64_t seed = 1;
  auto* golden_cmd = app.add_subcommand("golden", "Record golden plans from a deployment");
  golden_cmd->add_option("--url", url, "Deployment base URL")->required();
  golden_cmd->add_option("--graph", graph_ref, "Graph file or URL (default: <url>/graph)");
  golden_cmd->add_option("--count", count, "Number of requests");
  golden_cmd->add_option("--seed", seed, "Request generator seed");
  golden_cmd->add_option("--out", out, "Output golden file")->required();

  std::string endpoint, spec_path, mode;
  std::size_t replicas = 1;
  bool paper_scale = false;
  auto* bench_sub = app.add_subcommand("bench", "Sweep the sources x targets grid against a deployment");
  bench_sub->add_option("--endpoint", endpoint, "Deployment base URL")->required();
  bench_sub->add_option("--spec", spec_path, "Workload spec JSON");
  bench_sub->add_option("--out", out, "Output directory")->required();
  bench_sub->add_flag("--paper-scale", paper_scale, "100 repetitions per cell");
  bench_sub->add_option("--mode", mode, "Deployment label (default: from /info)");
  bench_sub->add_option("--replicas", replicas, "Replica count for --mode");

  std::string dir_a, dir_b;
  auto* compare_sub = app.add_subcommand("compare", "Compare two bench output directories");
  compare_sub->add_option("--a", dir_a, "Baseline bench directory")->required();
  compare_sub->add_option("--b", dir_b, "Candidate bench directory")->required();
  compare_sub->add_option("--out", out, "Output directory")->required();

  std::string bbox, source, store;
  bool railways = false, bridges = false;
  auto* ingest_sub = app.add_subcommand("ingest", "Extract infrastructure into a store directory");
  ingest_sub->add_option("--bbox", bbox, "S,W,N,E")->required();
  ingest_sub->add_option("--source", source, "Overpass URL or fixture file")->required();
  ingest_sub->add_option("--store", store, "Store directory")->required();
  ingest_sub->add_flag("--railways", railways, "Also extract railway nodes");
  ingest_sub->add_flag("--bridges", bridges, "Also extract bridge polygons");

  double penalty = 3.0, radius = 500.0;
  bool merge_bridges = false;
  auto* graph_sub = app.add_subcommand("build-graph", "Build the graph file from a store");
  graph_sub->add_option("--store", store, "Store directory")->required();
  graph_sub->add_option("--out", out, "Graph file")->required();
  graph_sub->add_option("--penalty", penalty, "Indirect edge penalty factor");
  graph_sub->add_option("--radius", radius, "Indirect neighbor radius in meters");
  graph_sub->add_flag("--merge-bridges", merge_bridges, "Join bridge centroids to nearby towers");

  std::size_t towers = 5000;
  auto* synth_sub = app.add_subcommand("synth", "Write a synthetic Overpass power grid");
  synth_sub->add_option("--towers", towers, "Tower count");
  synth_sub->add_option("--seed", seed, "Generator seed");
  synth_sub->add_option("--bbox", bbox, "Region S,W,N,E (default: Denmark)");
  synth_sub->add_option("--out", out, "Output JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) return serve(role, config, port);
    if (*conf_cmd) return conformance(url, golden_path, timeout_s);
    if (*golden_cmd) return golden(url, graph_ref, count, seed, out);
    if (*bench_sub) return bench_cmd(endpoint, spec_path, out, paper_scale, mode, replicas);
    if (*compare_sub) return compare(dir_a, dir_b, out);
    if (*ingest_sub) return ingest_cmd(bbox, source, store, railways, bridges);
    if (*graph_sub) return build_graph_cmd(store, out, penalty, radius, merge_bridges);
    if (*synth_sub) return synth_cmd(towers, seed, bbox, out);
  } catch (const Error& e) {
    spdlog::error("{}: {}", to_string(e.code()), e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 0;
}
