#include "gridplan/net/bench_runner.hpp"

#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "gridplan/codec.hpp"
#include "gridplan/error.hpp"
#include "gridplan/net/client.hpp"
#include "gridplan/net/conformance.hpp"
#include "../svg_plot.hpp"

namespace gridplan::net {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

bench::Outcome classify(const HttpResponse& resp) {
  if (resp.status == 200) return bench::Outcome::kSuccess;
  if (resp.status == 422) {
    try {
      if (json::parse(resp.body).value("error", std::string()) == "UnreachableTargets") {
        return bench::Outcome::kUnreachable;
      }
    } catch (const json::exception&) {
    }
  }
  return bench::Outcome::kError;
}

void write_report_plots(const std::filesystem::path& dir, const bench::BenchReport& report) {
  std::filesystem::create_directories(dir / "plots");
  std::map<std::size_t, bench::PlotSeries> by_sources;
  const auto label = report.deployment.mode + " (" + std::to_string(report.deployment.replicas) + ")";
  static constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                            "#8c564b", "#e377c2", "#7f7f7f"};
  for (const auto& c : report.cells) {
    auto& s = by_sources[c.sources];
    s.label = std::to_string(c.sources) + " source(s)";
    s.color = kColors[by_sources.size() % std::size(kColors)];
    s.points.emplace_back(static_cast<double>(c.targets), c.mean_ms);
  }
  std::vector<bench::PlotSeries> series;
  for (auto& [_, s] : by_sources) series.push_back(std::move(s));
  std::ofstream svg(dir / "plots" / "latency_by_targets.svg", std::ios::trunc);
  svg << bench::line_chart_svg(label + ": mean latency", "targets", "mean latency (ms)", series);
}

}  // namespace

BenchRun run_benchmark(const std::string& endpoint, const bench::Workload& workload, const BenchRunOptions& options) {
  BenchRun run;
  auto send = [&](const bench::WorkloadItem& item) {
    const auto body = json(item.request).dump();
    const auto t0 = Clock::now();
    const auto resp = http_post(endpoint, "/plan", body, options.request_timeout);
    const auto t1 = Clock::now();
    return bench::BenchSample{item.sources, item.targets, item.rep,
                              std::chrono::duration<double, std::milli>(t1 - t0).count(), classify(resp)};
  };
  try {
    if (options.warmup && !workload.items.empty()) {
      const auto& first = workload.items.front();
      for (const auto& item : workload.items) {
        if (item.sources != first.sources || item.targets != first.targets) break;
        send(item);
      }
    }
    for (const auto& item : workload.items) {
      run.samples.push_back(send(item));
      if (options.on_sample) options.on_sample(run.samples.back());
    }
  } catch (const Error& e) {
    run.aborted = e.what();
  }
  return run;
}

bench::Deployment query_deployment(const std::string& endpoint) {
  const auto resp = http_get(endpoint, "/info");
  if (resp.status != 200) throw Error(ErrorCode::kMalformedResponse, "GET /info answered " + std::to_string(resp.status));
  const auto j = json::parse(resp.body);
  return bench::Deployment{j.at("mode").get<std::string>(), j.at("replicas").get<std::size_t>()};
}

InfrastructureGraph load_graph_ref(const std::string& graph_ref, const std::string& endpoint) {
  if (graph_ref.empty() || graph_ref.starts_with("http://") || graph_ref.starts_with("https://")) {
    const auto resp = http_get(graph_ref.empty() ? endpoint : graph_ref, "/graph");
    if (resp.status != 200) {
      throw Error(ErrorCode::kTransportError, "GET /graph answered " + std::to_string(resp.status));
    }
    return deserialize_graph(resp.body);
  }
  std::ifstream in(graph_ref, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read graph file " + graph_ref);
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize_graph(buf.str());
}

bench::BenchReport bench_to_dir(const std::string& endpoint, const bench::WorkloadSpec& spec,
                                const std::filesystem::path& out_dir, std::optional<bench::Deployment> deployment,
                                const BenchRunOptions& options) {
  wait_ready(endpoint, std::chrono::seconds(120));
  const auto graph = load_graph_ref(spec.graph_ref, endpoint);
  const auto workload = bench::generate_workload(spec, graph);
  const auto dep = deployment ? *deployment : query_deployment(endpoint);
  std::filesystem::create_directories(out_dir);

  auto opts = options;
  opts.warmup = spec.warmup && options.warmup;
  spdlog::info("benchmark: {} requests against {} ({}, {} replicas)", workload.items.size(), endpoint, dep.mode,
               dep.replicas);
  const auto run = run_benchmark(endpoint, workload, opts);
  bench::write_samples_csv(out_dir / "samples.csv", dep, run.samples);
  if (run.aborted) {
    throw Error(ErrorCode::kEndpointDown, "endpoint down after " + std::to_string(run.samples.size()) +
                                              " samples: " + *run.aborted);
  }
  const auto report = bench::aggregate(run.samples, dep, workload.hash);
  std::ofstream(out_dir / "report.json", std::ios::trunc) << report.to_json().dump(2) << '\n';
  write_report_plots(out_dir, report);
  return report;
}

std::vector<bench::CellComparison> compare_dirs(const std::filesystem::path& a, const std::filesystem::path& b,
                                                const std::filesystem::path& out_dir) {
  auto load = [](const std::filesystem::path& dir) {
    std::ifstream in(dir / "report.json");
    if (!in) throw Error(ErrorCode::kIoError, "cannot read " + (dir / "report.json").string());
    return bench::BenchReport::from_json(json::parse(in));
  };
  const auto ra = load(a);
  const auto rb = load(b);
  const auto rows = bench::compare_reports(ra, rb);
  bench::write_comparison(out_dir, ra, rb, rows);
  return rows;
}

}  // namespace gridplan::net
