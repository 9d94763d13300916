#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gridplan/bench.hpp"

namespace gridplan::net {

struct BenchRunOptions {
  bool warmup = true;  // replay the first cell once, unrecorded
  std::chrono::seconds request_timeout{600};
  std::function<void(const bench::BenchSample&)> on_sample;  // progress hook
};

struct BenchRun {
  std::vector<bench::BenchSample> samples;
  std::optional<std::string> aborted;  // set when the endpoint went down
};

/// Closed-loop replay of the workload against endpoint/plan, one request in
/// flight. 200 is a success, 422 UnreachableTargets an unreachable outcome,
/// any other answer an error. A transport failure stops the run and sets
/// `aborted`; samples collected so far are kept.
BenchRun run_benchmark(const std::string& endpoint, const bench::Workload& workload,
                       const BenchRunOptions& options = {});

/// Mode and replica count as reported by endpoint/info.
bench::Deployment query_deployment(const std::string& endpoint);

/// Loads the graph named by graph_ref: an http(s) URL of a service exposing
/// /graph, or a graph file path. Empty means endpoint/graph.
InfrastructureGraph load_graph_ref(const std::string& graph_ref, const std::string& endpoint);

/// Full bench command: readiness, workload, run, then samples.csv,
/// report.json and plots/ in out_dir. Throws kEndpointDown after flushing
/// the partial CSV when the run aborts.
bench::BenchReport bench_to_dir(const std::string& endpoint, const bench::WorkloadSpec& spec,
                                const std::filesystem::path& out_dir,
                                std::optional<bench::Deployment> deployment = std::nullopt,
                                const BenchRunOptions& options = {});

/// Reads report.json from two bench output directories and writes the
/// comparison of b against a into out_dir.
std::vector<bench::CellComparison> compare_dirs(const std::filesystem::path& a, const std::filesystem::path& b,
                                                const std::filesystem::path& out_dir);

}  // namespace gridplan::net
