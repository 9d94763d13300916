#include "gridplan/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "gridplan/codec.hpp"
#include "gridplan/error.hpp"
#include "svg_plot.hpp"

namespace gridplan::bench {

using nlohmann::json;

WorkloadSpec WorkloadSpec::from_json(const json& j) {
  WorkloadSpec spec;
  spec.source_counts = j.value("source_counts", spec.source_counts);
  spec.target_counts = j.value("target_counts", spec.target_counts);
  spec.reps_per_cell = j.value("reps_per_cell", spec.reps_per_cell);
  spec.seed = j.value("seed", spec.seed);
  spec.graph_ref = j.value("graph_ref", spec.graph_ref);
  spec.warmup = j.value("warmup", spec.warmup);
  if (spec.source_counts.empty() || spec.target_counts.empty() || spec.reps_per_cell == 0) {
    throw Error(ErrorCode::kInvalidArgument, "workload spec needs sources, targets and reps_per_cell > 0");
  }
  for (auto c : spec.source_counts) {
    if (c == 0) throw Error(ErrorCode::kInvalidArgument, "source counts must be positive");
  }
  for (auto c : spec.target_counts) {
    if (c == 0) throw Error(ErrorCode::kInvalidArgument, "target counts must be positive");
  }
  return spec;
}

json WorkloadSpec::to_json() const {
  return json{{"source_counts", source_counts}, {"target_counts", target_counts},
              {"reps_per_cell", reps_per_cell}, {"seed", seed},
              {"graph_ref", graph_ref},         {"warmup", warmup}};
}

std::uint64_t workload_hash(const std::vector<WorkloadItem>& items) {
  json list = json::array();
  for (const auto& it : items) {
    list.push_back({{"sources", it.sources}, {"targets", it.targets}, {"rep", it.rep}, {"request", it.request}});
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : list.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Workload generate_workload(const WorkloadSpec& spec, const InfrastructureGraph& graph) {
  const auto max_s = *std::max_element(spec.source_counts.begin(), spec.source_counts.end());
  const auto max_t = *std::max_element(spec.target_counts.begin(), spec.target_counts.end());
  if (graph.node_count() < max_s + max_t) {
    throw Error(ErrorCode::kGraphTooSmall, "graph has " + std::to_string(graph.node_count()) +
                                               " nodes, workload needs " + std::to_string(max_s + max_t));
  }
  std::vector<NodeId> ids;
  std::vector<GeoPoint> points;
  for (const auto& [id, p] : graph.nodes()) {
    ids.push_back(id);
    points.push_back(p);
  }
  std::vector<std::size_t> perm(ids.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;

  std::mt19937_64 rng(spec.seed);
  Workload w;
  w.items.reserve(spec.total_requests());
  for (auto s : spec.source_counts) {
    for (auto t : spec.target_counts) {
      for (std::size_t rep = 0; rep < spec.reps_per_cell; ++rep) {
        // Partial Fisher-Yates: the first s+t slots become a uniform sample.
        const auto k = s + t;
        for (std::size_t i = 0; i < k; ++i) {
          std::swap(perm[i], perm[i + rng() % (perm.size() - i)]);
        }
        WorkloadItem item{s, t, rep, {}};
        item.request.seed = spec.seed;
        for (std::size_t i = 0; i < s; ++i) item.request.uavs.push_back(points[perm[i]]);
        for (std::size_t i = s; i < k; ++i) item.request.targets.push_back(ids[perm[i]]);
        w.items.push_back(std::move(item));
      }
    }
  }
  w.hash = workload_hash(w.items);
  return w;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kSuccess: return "success";
    case Outcome::kUnreachable: return "unreachable";
    case Outcome::kError: return "error";
  }
  return "error";
}

Outcome outcome_from_string(std::string_view s) {
  if (s == "success") return Outcome::kSuccess;
  if (s == "unreachable") return Outcome::kUnreachable;
  if (s == "error") return Outcome::kError;
  throw Error(ErrorCode::kInvalidArgument, "unknown outcome " + std::string(s));
}

HostInfo HostInfo::current() {
  HostInfo h;
  h.cpus = std::thread::hardware_concurrency();
  const long pages = ::sysconf(_SC_PHYS_PAGES);
  const long page = ::sysconf(_SC_PAGE_SIZE);
  if (pages > 0 && page > 0) h.memory_bytes = static_cast<std::uint64_t>(pages) * static_cast<std::uint64_t>(page);
  return h;
}

void write_samples_csv(const std::filesystem::path& file, const Deployment& d, const std::vector<BenchSample>& samples) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + file.string());
  out << "mode,replicas,sources,targets,rep,latency_ms,outcome\n";
  char latency[64];
  for (const auto& s : samples) {
    std::snprintf(latency, sizeof latency, "%.6f", s.latency_ms);
    out << d.mode << ',' << d.replicas << ',' << s.sources << ',' << s.targets << ',' << s.rep << ',' << latency
        << ',' << to_string(s.outcome) << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + file.string());
}

std::vector<BenchSample> read_samples_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + file.string());
  std::string line;
  std::getline(in, line);
  if (line != "mode,replicas,sources,targets,rep,latency_ms,outcome") {
    throw Error(ErrorCode::kIoError, "unexpected CSV header in " + file.string());
  }
  std::vector<BenchSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 7) throw Error(ErrorCode::kIoError, "malformed CSV row: " + line);
    out.push_back(BenchSample{std::stoul(f[2]), std::stoul(f[3]), std::stoul(f[4]), std::stod(f[5]),
                              outcome_from_string(f[6])});
  }
  return out;
}

const CellStats* BenchReport::cell(std::size_t sources, std::size_t targets) const {
  for (const auto& c : cells) {
    if (c.sources == sources && c.targets == targets) return &c;
  }
  return nullptr;
}

json BenchReport::to_json() const {
  json cells_json = json::array();
  for (const auto& c : cells) {
    cells_json.push_back({{"sources", c.sources},     {"targets", c.targets},     {"samples", c.samples},
                          {"successes", c.successes}, {"mean_ms", c.mean_ms},     {"median_ms", c.median_ms},
                          {"p95_ms", c.p95_ms},       {"success_rate", c.success_rate}});
  }
  return json{{"deployment", {{"mode", deployment.mode}, {"replicas", deployment.replicas}}},
              {"host", {{"cpus", host.cpus}, {"memory_bytes", host.memory_bytes}}},
              {"workload_hash", workload_hash},
              {"cells", cells_json}};
}

BenchReport BenchReport::from_json(const json& j) {
  BenchReport r;
  r.deployment.mode = j.at("deployment").at("mode").get<std::string>();
  r.deployment.replicas = j.at("deployment").at("replicas").get<std::size_t>();
  r.host.cpus = j.at("host").at("cpus").get<unsigned>();
  r.host.memory_bytes = j.at("host").at("memory_bytes").get<std::uint64_t>();
  r.workload_hash = j.at("workload_hash").get<std::uint64_t>();
  for (const auto& c : j.at("cells")) {
    r.cells.push_back(CellStats{c.at("sources").get<std::size_t>(), c.at("targets").get<std::size_t>(),
                                c.at("samples").get<std::size_t>(), c.at("successes").get<std::size_t>(),
                                c.at("mean_ms").get<double>(), c.at("median_ms").get<double>(),
                                c.at("p95_ms").get<double>(), c.at("success_rate").get<double>()});
  }
  return r;
}

BenchReport aggregate(const std::vector<BenchSample>& samples, const Deployment& deployment,
                      std::uint64_t hash, const HostInfo& host) {
  std::map<std::pair<std::size_t, std::size_t>, std::vector<const BenchSample*>> groups;
  for (const auto& s : samples) groups[{s.sources, s.targets}].push_back(&s);

  BenchReport report{deployment, host, hash, {}};
  for (const auto& [key, group] : groups) {
    CellStats c;
    c.sources = key.first;
    c.targets = key.second;
    c.samples = group.size();
    std::vector<double> ok;
    for (const auto* s : group) {
      if (s->outcome == Outcome::kSuccess) ok.push_back(s->latency_ms);
    }
    c.successes = ok.size();
    c.success_rate = static_cast<double>(ok.size()) / static_cast<double>(group.size());
    if (!ok.empty()) {
      std::sort(ok.begin(), ok.end());
      double sum = 0.0;
      for (double v : ok) sum += v;
      c.mean_ms = sum / static_cast<double>(ok.size());
      const auto n = ok.size();
      c.median_ms = n % 2 ? ok[n / 2] : (ok[n / 2 - 1] + ok[n / 2]) / 2.0;
      const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
      c.p95_ms = ok[std::max<std::size_t>(rank, 1) - 1];
    }
    report.cells.push_back(c);
  }
  return report;
}

std::vector<CellComparison> compare_reports(const BenchReport& a, const BenchReport& b) {
  if (a.workload_hash != b.workload_hash) {
    throw Error(ErrorCode::kWorkloadMismatch, "reports were produced from different workloads");
  }
  std::vector<CellComparison> rows;
  for (const auto& ca : a.cells) {
    const auto* cb = b.cell(ca.sources, ca.targets);
    if (!cb) throw Error(ErrorCode::kWorkloadMismatch, "cell missing from second report");
    rows.push_back(CellComparison{ca.sources, ca.targets, ca.mean_ms, cb->mean_ms,
                                  cb->mean_ms > 0.0 ? ca.mean_ms / cb->mean_ms : 0.0});
  }
  return rows;
}

void write_comparison(const std::filesystem::path& out_dir, const BenchReport& a, const BenchReport& b,
                      const std::vector<CellComparison>& rows) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "plots", ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + (out_dir / "plots").string());
  {
    std::ofstream csv(out_dir / "comparison.csv", std::ios::trunc);
    if (!csv) throw Error(ErrorCode::kIoError, "cannot write comparison.csv");
    csv << "sources,targets,mean_a_ms,mean_b_ms,speedup\n";
    char buf[128];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.6f,%.6f,%.6f\n", r.sources, r.targets, r.mean_a_ms, r.mean_b_ms,
                    r.speedup);
      csv << buf;
    }
  }
  auto label = [](const BenchReport& r) {
    return r.deployment.mode + " (" + std::to_string(r.deployment.replicas) + ")";
  };
  std::map<std::size_t, std::vector<const CellComparison*>> by_sources, by_targets;
  for (const auto& r : rows) {
    by_sources[r.sources].push_back(&r);
    by_targets[r.targets].push_back(&r);
  }
  auto emit = [&](const std::string& name, const std::string& title, const std::string& x_label,
                  const std::vector<const CellComparison*>& cells, bool x_is_targets) {
    PlotSeries sa{label(a), "#1f77b4", {}}, sb{label(b), "#ff7f0e", {}};
    for (const auto* c : cells) {
      const double x = static_cast<double>(x_is_targets ? c->targets : c->sources);
      sa.points.emplace_back(x, c->mean_a_ms);
      sb.points.emplace_back(x, c->mean_b_ms);
    }
    std::ofstream svg(out_dir / "plots" / name, std::ios::trunc);
    if (!svg) throw Error(ErrorCode::kIoError, "cannot write plot " + name);
    svg << line_chart_svg(title, x_label, "mean latency (ms)", {sa, sb});
  };
  for (const auto& [s, cells] : by_sources) {
    emit("sources_" + std::to_string(s) + ".svg", std::to_string(s) + " source(s), varying targets", "targets",
         cells, true);
  }
  for (const auto& [t, cells] : by_targets) {
    emit("targets_" + std::to_string(t) + ".svg", std::to_string(t) + " target(s), varying sources", "sources",
         cells, false);
  }
}

}  // namespace gridplan::bench
