// Acceptance suite: one PASS/FAIL line per criterion.
//
//   gridplan_acceptance [--only NAME] [--skip NAME] [--workdir DIR]

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "gridplan/astar.hpp"
#include "gridplan/bench.hpp"
#include "gridplan/codec.hpp"
#include "gridplan/error.hpp"
#include "gridplan/graph.hpp"
#include "gridplan/infra_store.hpp"
#include "gridplan/mission.hpp"
#include "gridplan/net/bench_runner.hpp"
#include "gridplan/net/client.hpp"
#include "gridplan/net/conformance.hpp"
#include "gridplan/net/service.hpp"
#include "gridplan/synthetic.hpp"
#include "gridplan/vrp.hpp"
#include "oracles.hpp"
#include "process.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gridplan;
using namespace gridplan::testing;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary | std::ios::trunc) << s; }

// Shared state built lazily by the criteria that need it.
struct Context {
  fs::path work;
  std::optional<InfrastructureGraph> dk_graph;
  fs::path dk_graph_file;
  std::unique_ptr<Deployment> mono, micro1, micro10;

  const InfrastructureGraph& denmark_graph() {
    if (!dk_graph) {
      const auto store = ingest(BoundingBox(54.5, 8.0, 57.8, 15.2), osm::FixtureFile{fixture("denmark_subset.json")});
      dk_graph = build_graph(store);
      dk_graph_file = work / "denmark_graph.json";
      write_file(dk_graph_file, serialize_graph(*dk_graph));
    }
    return *dk_graph;
  }

  Deployment& monolith() {
    denmark_graph();
    if (!mono) mono = Deployment::monolith(dk_graph_file, work);
    return *mono;
  }
  Deployment& microservices(std::size_t replicas) {
    denmark_graph();
    auto& slot = replicas == 1 ? micro1 : micro10;
    if (!slot) {
      const auto dir = work / ("micro" + std::to_string(replicas));
      fs::create_directories(dir);
      slot = Deployment::microservices(dk_graph_file, replicas, 32, dir);
    }
    return *slot;
  }
};

// ---------------------------------------------------------------------------

Verdict pathfinding_oracle(Context&) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::size_t pairs = 0, cost_mismatch = 0, expansion_violations = 0;
  for (int g = 0; g < 100; ++g) {
    const auto n = 50 + rng() % 151;
    const auto graph = random_connected_graph(rng, n);
    const SearchGraph search(graph);
    std::vector<NodeId> ids;
    for (const auto& [id, _] : graph.nodes()) ids.push_back(id);
    for (int k = 0; k < 20; ++k) {
      const auto s = ids[rng() % ids.size()];
      const auto t = ids[rng() % ids.size()];
      SearchStats stats;
      const auto a = astar_shortest_path(search, s, t, &stats);
      const auto d = dijkstra(graph, s, t);
      ++pairs;
      if (!d.cost || *d.cost != a.total_cost_m) ++cost_mismatch;
      if (stats.expanded > d.expanded) ++expansion_violations;
    }
  }
  const double secs = seconds_since(t0);
  return {cost_mismatch == 0 && expansion_violations == 0 && secs < 30.0,
          fmt("%zu pairs on 100 graphs, cost mismatches %zu, expansion violations %zu, %.2f s (< 30 s)", pairs,
              cost_mismatch, expansion_violations, secs)};
}

Verdict vrp_oracle(Context&) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> lat(55.30, 55.40), lon(10.20, 10.35);
  std::size_t over_bound = 0, ls_worse = 0, inconsistent = 0;
  double worst_ratio = 1.0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t V = 1 + rng() % 2, T = 1 + rng() % 5;
    std::vector<GeoPoint> pts;
    for (std::size_t k = 0; k < V + T; ++k) pts.emplace_back(lat(rng), lon(rng));
    CostMatrix m(V, T);
    for (std::size_t a = 0; a < V + T; ++a) {
      for (std::size_t b = std::max(a + 1, V); b < V + T; ++b) {
        const auto c = static_cast<std::int64_t>(std::llround(haversine_distance(pts[a], pts[b])));
        m.at(a, b) = c;
        m.at(b, a) = c;
      }
    }
    const auto sol = solve_vrp(m, V, rng());
    const auto opt = brute_force_vrp(m, V);
    std::int64_t recomputed = 0;
    std::multiset<std::size_t> seen;
    for (std::size_t v = 0; v < sol.routes.size(); ++v) {
      recomputed += route_cost(m, v, sol.routes[v]);
      seen.insert(sol.routes[v].begin(), sol.routes[v].end());
    }
    if (recomputed != sol.total_cost || seen.size() != T || std::set<std::size_t>(seen.begin(), seen.end()).size() != T) {
      ++inconsistent;
    }
    if (static_cast<double>(sol.total_cost) > 1.2 * static_cast<double>(opt)) ++over_bound;
    if (sol.total_cost > sol.construction_cost) ++ls_worse;
    if (opt > 0) worst_ratio = std::max(worst_ratio, static_cast<double>(sol.total_cost) / static_cast<double>(opt));
  }
  const double secs = seconds_since(t0);
  return {over_bound == 0 && ls_worse == 0 && inconsistent == 0 && secs < 60.0,
          fmt("500 instances, worst heuristic/optimum %.4f (<= 1.2), over bound %zu, local search worse %zu, "
              "inconsistent %zu, %.2f s (< 60 s)",
              worst_ratio, over_bound, ls_worse, inconsistent, secs)};
}

Verdict graph_construction(Context& ctx) {
  // Tower count straight from the fixture JSON, independent of the parser.
  const auto raw = json::parse(read_file(fixture("denmark_subset.json")));
  std::size_t fixture_towers = 0;
  for (const auto& e : raw.at("elements")) {
    if (e.at("type") == "node" && e.contains("tags") && e["tags"].value("power", "") == "tower") ++fixture_towers;
  }
  const auto& g = ctx.denmark_graph();
  const double penalty = GraphOptions{}.penalty_factor;
  std::size_t bad_cost = 0, direct = 0, indirect = 0;
  for (const auto& e : g.edges()) {
    const double h = haversine_distance(g.location(e.u), g.location(e.v));
    const double factor = e.kind == EdgeKind::kDirect ? 1.0 : penalty;
    if (std::fabs(e.cost_m - factor * h) > 1e-9 * factor * h) ++bad_cost;
    (e.kind == EdgeKind::kDirect ? direct : indirect)++;
  }
  const auto bytes = serialize_graph(g);
  const auto back = deserialize_graph(bytes);
  const bool roundtrip = same_graph(back, g) && serialize_graph(back) == bytes;
  return {g.node_count() == fixture_towers && bad_cost == 0 && roundtrip,
          fmt("nodes %zu vs fixture towers %zu, edges %zu (%zu direct, %zu indirect), cost mismatches %zu, "
              "roundtrip %s",
              g.node_count(), fixture_towers, g.edge_count(), direct, indirect, bad_cost,
              roundtrip ? "identity" : "DIFFERS")};
}

Verdict mode_equivalence(Context& ctx) {
  const auto requests = net::random_requests(ctx.denmark_graph(), 50, 4242, 4, 12);
  auto& mono = ctx.monolith();
  auto& m1 = ctx.microservices(1);
  auto& m10 = ctx.microservices(10);
  std::size_t differ = 0, ok = 0;
  for (const auto& r : requests) {
    const auto body = json(r).dump();
    const auto a = net::http_post(mono.url(), "/plan", body);
    const auto b = net::http_post(m1.url(), "/plan", body);
    const auto c = net::http_post(m10.url(), "/plan", body);
    if (a.status == 200) ++ok;
    if (a.status != b.status || a.status != c.status || a.body != b.body || a.body != c.body) ++differ;
  }
  return {differ == 0 && ok > 0, fmt("50 requests (%zu planned), byte differences vs 1 replica / 10 replicas: %zu",
                                     ok, differ)};
}

// Pathfinder stand-in with random response delays that records how many
// requests it is serving at once.
class DelayingPathfinder {
 public:
  explicit DelayingPathfinder(const std::string& graph_file)
      : paths_(graph_file_fetcher(graph_file)) {
    server_.new_task_queue = [] { return new httplib::ThreadPool(64); };
    server_.Post("/path", [this](const httplib::Request& req, httplib::Response& res) {
      const auto now = ++in_flight_;
      for (auto seen = max_seen_.load(); now > seen && !max_seen_.compare_exchange_weak(seen, now);) {
      }
      thread_local std::mt19937_64 rng(std::hash<std::thread::id>{}(std::this_thread::get_id()));
      std::this_thread::sleep_for(std::chrono::microseconds(rng() % 4000));
      const auto r = paths_.handle(path_request_from_json(json::parse(req.body)));
      res.set_content(json(r).dump(), "application/json");
      --in_flight_;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::jthread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~DelayingPathfinder() {
    server_.stop();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int max_seen() const { return max_seen_.load(); }

 private:
  PathService paths_;
  httplib::Server server_;
  int port_ = 0;
  std::atomic<int> in_flight_{0}, max_seen_{0};
  std::jthread thread_;
};

// Client-side view of outstanding calls.
class CountingClient final : public PathClient {
 public:
  explicit CountingClient(PathClient& inner) : inner_(inner) {}
  PathOutcome shortest_path(const PathRequest& r) override {
    const auto now = ++in_flight_;
    for (auto seen = max_seen_.load(); now > seen && !max_seen_.compare_exchange_weak(seen, now);) {
    }
    auto out = inner_.shortest_path(r);
    --in_flight_;
    return out;
  }
  int max_seen() const { return max_seen_.load(); }

 private:
  PathClient& inner_;
  std::atomic<int> in_flight_{0}, max_seen_{0};
};

Verdict concurrency_contract(Context& ctx) {
  const auto& graph = ctx.denmark_graph();
  constexpr std::size_t kMaxInFlight = 8;
  DelayingPathfinder stub(ctx.dk_graph_file.string());
  net::HttpPathClient http({stub.url()});
  CountingClient counting(http);

  auto request = net::random_requests(graph, 1, 7, 4, 14).front();
  for (std::uint64_t s = 100; request.uavs.size() < 4 || request.targets.size() < 10; ++s) {
    request = net::random_requests(graph, 1, s, 4, 14).front();
  }
  PathService local_paths(graph_file_fetcher(ctx.dk_graph_file.string()));
  LocalPathClient local(local_paths);
  const auto reference = assemble_distance_matrix(request, local, AssemblyOptions{1});

  std::size_t mismatches = 0;
  for (int i = 0; i < 20; ++i) {
    const auto m = assemble_distance_matrix(request, counting, AssemblyOptions{kMaxInFlight});
    if (!(m.cost == reference.cost) || m.path_cache != reference.path_cache || m.source_nodes != reference.source_nodes) {
      ++mismatches;
    }
  }

  // Concurrent first requests against a cold pathfinder: one upstream fetch.
  std::atomic<int> graph_gets{0};
  const auto graph_bytes = serialize_graph(graph);
  httplib::Server graph_stub;
  graph_stub.Get("/graph", [&](const httplib::Request&, httplib::Response& res) {
    ++graph_gets;
    std::this_thread::sleep_for(std::chrono::milliseconds(300));
    res.set_content(graph_bytes, "application/json");
  });
  const int graph_port = graph_stub.bind_to_any_port("127.0.0.1");
  std::jthread graph_thread([&] { graph_stub.listen_after_bind(); });
  graph_stub.wait_until_ready();

  net::ServiceConfig cfg;
  cfg.role = net::Role::kPathfinder;
  cfg.listen_port = 0;
  cfg.worker_threads = 32;
  cfg.upstreams["graph"] = {"http://127.0.0.1:" + std::to_string(graph_port)};
  net::Service pathfinder(cfg);
  pathfinder.start();
  const auto pf_url = "http://127.0.0.1:" + std::to_string(pathfinder.port());
  const auto ids = request.targets;
  std::atomic<int> ok{0};
  {
    std::vector<std::jthread> callers;
    for (int i = 0; i < 16; ++i) {
      callers.emplace_back([&, i] {
        const auto body = path_request_to_json(PathRequest{ids[i % ids.size()], ids[(i + 1) % ids.size()]}).dump();
        if (net::http_post(pf_url, "/path", body).status == 200) ++ok;
      });
    }
  }
  pathfinder.stop();
  graph_stub.stop();

  const bool pass = mismatches == 0 && counting.max_seen() <= static_cast<int>(kMaxInFlight) &&
                    stub.max_seen() <= static_cast<int>(kMaxInFlight) && graph_gets == 1 && ok == 16;
  return {pass, fmt("20 assemblies of %zu pairs: %zu differing matrices; max in flight client %d / server %d "
                    "(limit %zu); 16 concurrent cold requests -> %d graph fetch(es), %d ok",
                    request.uavs.size() * request.targets.size() +
                        request.targets.size() * (request.targets.size() - 1) / 2,
                    mismatches, counting.max_seen(), stub.max_seen(), kMaxInFlight, graph_gets.load(), ok.load())};
}

double mean_of(const bench::BenchReport& r, std::size_t s, std::size_t t) {
  const auto* c = r.cell(s, t);
  return c ? c->mean_ms : std::nan("");
}

Verdict performance_trend(Context& ctx) {
  const auto t0 = Clock::now();
  const auto dir = ctx.work / "performance";
  fs::create_directories(dir);
  SyntheticGridOptions synth;  // 5,000 towers over Denmark
  write_file(dir / "grid.json", json{{"elements", synthesize_power_elements(synth)}}.dump());
  const auto store = ingest(BoundingBox(synth.south, synth.west, synth.north, synth.east),
                            osm::FixtureFile{(dir / "grid.json").string()});
  const auto graph_file = dir / "graph.json";
  const auto graph = build_graph(store);
  write_file(graph_file, serialize_graph(graph));

  bench::WorkloadSpec spec;
  spec.seed = 5;
  spec.graph_ref = graph_file.string();
  bench::BenchReport mono, micro;
  {
    auto d = Deployment::monolith(graph_file, dir);
    mono = net::bench_to_dir(d->url(), spec, dir / "monolith");
  }
  {
    fs::create_directories(dir / "micro_logs");
    auto d = Deployment::microservices(graph_file, 10, 32, dir / "micro_logs");
    micro = net::bench_to_dir(d->url(), spec, dir / "microservices");
  }
  net::compare_dirs(dir / "monolith", dir / "microservices", dir / "comparison");

  // (a) speedup at the largest cell.
  const double speedup = mean_of(mono, 16, 64) / mean_of(micro, 16, 64);
  // (b) monolith latency is linear in the number of path queries.
  std::vector<double> xs, ys;
  for (const auto& c : mono.cells) {
    xs.push_back(static_cast<double>(c.sources * c.targets + c.targets * (c.targets - 1) / 2));
    ys.push_back(c.mean_ms);
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / n, my += ys[i] / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double r2 = sxy * sxy / (sxx * syy);
  double worst_growth = 0.0;
  for (auto s : spec.source_counts) worst_growth = std::max(worst_growth, mean_of(micro, s, 64) / mean_of(micro, s, 8));
  // (c) small-instance overhead, with a 0.8 safety factor.
  const double small_ratio = mean_of(micro, 1, 1) / mean_of(mono, 1, 1);
  const double secs = seconds_since(t0);

  const bool a = speedup >= 3.0, b = r2 >= 0.8 && worst_growth <= 4.0, c = small_ratio >= 0.8;
  return {a && b && c && secs < 1200.0,
          fmt("host cpus %u; (a) speedup at (16,64) %.2fx [%s, >= 3x; monolith %.0f ms, 10 replicas %.0f ms]; "
              "(b) monolith R^2 %.3f [>= 0.8], microservice latency(64)/latency(8) worst %.2f [%s, <= 4]; "
              "(c) (1,1) microservice/monolith %.2f [%s, >= 0.8]; %.0f s (< 1200 s); reports in %s",
              bench::HostInfo::current().cpus, speedup, a ? "ok" : "FAIL", mean_of(mono, 16, 64),
              mean_of(micro, 16, 64), r2, worst_growth, worst_growth <= 4.0 ? "ok" : "FAIL", small_ratio,
              c ? "ok" : "FAIL", secs, (dir / "comparison").c_str())};
}

// Independent CSV reader and aggregate recomputation.
struct RawRow {
  std::size_t s, t, rep;
  double ms;
  std::string outcome;
};

std::vector<RawRow> parse_csv(const fs::path& file) {
  std::vector<RawRow> rows;
  std::ifstream in(file);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::string mode, outcome;
    std::size_t replicas, s, t, rep;
    double ms;
    ss >> mode >> replicas >> s >> t >> rep >> ms >> outcome;
    rows.push_back({s, t, rep, ms, outcome});
  }
  return rows;
}

Verdict benchmark_accounting(Context& ctx) {
  auto& mono = ctx.monolith();
  const auto dir = ctx.work / "accounting";
  fs::create_directories(dir);
  bench::WorkloadSpec spec;
  spec.seed = 11;
  spec.graph_ref = ctx.dk_graph_file.string();
  write_file(dir / "spec.json", spec.to_json().dump());

  const int rc = run_command({cli_path(), "bench", "--endpoint", mono.url(), "--spec", (dir / "spec.json").string(),
                              "--out", (dir / "desk").string()},
                             (dir / "bench.log").string(), {{"LOG_LEVEL", "warn"}});
  const int rc_full = run_command({cli_path(), "bench", "--endpoint", mono.url(), "--spec",
                                    (dir / "spec.json").string(), "--out", (dir / "full").string(), "--paper-scale"},
                                   (dir / "bench.log").string(), {{"LOG_LEVEL", "warn"}});
  const auto desk = parse_csv(dir / "desk" / "samples.csv");
  const auto full = parse_csv(dir / "full" / "samples.csv");

  std::map<std::pair<std::size_t, std::size_t>, std::vector<RawRow>> cells;
  for (const auto& r : desk) cells[{r.s, r.t}].push_back(r);
  bool per_cell = cells.size() == 35;
  for (const auto& [_, v] : cells) per_cell = per_cell && v.size() == 10;

  const auto report = bench::BenchReport::from_json(json::parse(read_file(dir / "desk" / "report.json")));
  std::size_t mismatches = 0;
  for (const auto& [key, rows] : cells) {
    std::vector<double> ok;
    for (const auto& r : rows) {
      if (r.outcome == "success") ok.push_back(r.ms);
    }
    std::sort(ok.begin(), ok.end());
    const auto* c = report.cell(key.first, key.second);
    if (!c || ok.empty()) {
      ++mismatches;
      continue;
    }
    double sum = 0;
    for (double v : ok) sum += v;
    const double mean = sum / static_cast<double>(ok.size());
    const std::size_t k = ok.size();
    const double median = k % 2 ? ok[k / 2] : 0.5 * (ok[k / 2 - 1] + ok[k / 2]);
    const double p95 = ok[static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(k))) - 1];
    const double rate = static_cast<double>(k) / static_cast<double>(rows.size());
    auto near = [](double a, double b) { return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(b)); };
    if (!near(c->mean_ms, mean) || !near(c->median_ms, median) || !near(c->p95_ms, p95) ||
        !near(c->success_rate, rate)) {
      ++mismatches;
    }
  }
  const bool pass = rc == 0 && rc_full == 0 && desk.size() == 350 && full.size() == 3500 && per_cell &&
                    mismatches == 0;
  return {pass, fmt("desk run %zu samples (35 cells x 10: %s), full-scale run %zu samples, aggregate mismatches %zu",
                    desk.size(), per_cell ? "yes" : "no", full.size(), mismatches)};
}

bool valid_exposition(const std::string& text, std::string& bad_line) {
  static const std::regex help(R"(# HELP [a-zA-Z_:][a-zA-Z0-9_:]* .*)");
  static const std::regex type(R"(# TYPE [a-zA-Z_:][a-zA-Z0-9_:]* (counter|gauge|histogram|summary|untyped))");
  static const std::regex sample(
      R"([a-zA-Z_:][a-zA-Z0-9_:]*(\{[a-zA-Z_][a-zA-Z0-9_]*="(?:[^"\\\n]|\\.)*"(,[a-zA-Z_][a-zA-Z0-9_]*="(?:[^"\\\n]|\\.)*")*\})? ([-+]?[0-9]*\.?[0-9]+([eE][-+]?[0-9]+)?|[-+]?Inf|NaN)( -?[0-9]+)?)");
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const bool ok = line.starts_with("# HELP") ? std::regex_match(line, help)
                    : line.starts_with("# TYPE") ? std::regex_match(line, type)
                    : line.starts_with("#")      ? true
                                                 : std::regex_match(line, sample);
    if (!ok) {
      bad_line = line;
      return false;
    }
  }
  return !text.empty() && text.back() == '\n';
}

Verdict metrics(Context& ctx) {
  const auto& graph = ctx.denmark_graph();
  const int port = free_port();
  ChildProcess pf({cli_path(), "serve", "--role", "pathfinder"},
                  {{"GRAPH_FILE", ctx.dk_graph_file.string()}, {"LISTEN_PORT", std::to_string(port)}, {"LOG_LEVEL", "warn"}},
                  (ctx.work / "metrics_pathfinder.log").string());
  const auto url = "http://127.0.0.1:" + std::to_string(port);
  net::wait_ready(url, std::chrono::seconds(30));
  std::vector<NodeId> ids;
  for (const auto& [id, _] : graph.nodes()) ids.push_back(id);
  constexpr int kRequests = 137;
  for (int i = 0; i < kRequests; ++i) {
    net::http_post(url, "/path", path_request_to_json(PathRequest{ids[i % ids.size()], ids[(7 * i + 3) % ids.size()]}).dump());
  }
  const auto resp = net::http_get(url, "/metrics");
  const auto& text = resp.body;
  std::uint64_t counted = 0, hist_count = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.starts_with("http_requests_total{") && line.find("route=\"/path\"") != std::string::npos) {
      counted += std::stoull(line.substr(line.rfind(' ') + 1));
    }
    if (line.starts_with("request_duration_seconds_count{") && line.find("route=\"/path\"") != std::string::npos) {
      hist_count = std::stoull(line.substr(line.rfind(' ') + 1));
    }
  }
  std::string bad;
  const bool grammar = valid_exposition(text, bad);
  httplib::Client cli(url);
  const auto head = cli.Get("/metrics");
  const bool content_type = head && head->get_header_value("Content-Type") == "text/plain; version=0.0.4";
  pf.signal(SIGTERM);
  const int exit_code = pf.wait();
  return {counted == kRequests && hist_count == kRequests && grammar && content_type && exit_code == 0,
          fmt("http_requests_total{route=\"/path\"} = %llu (expected %d), histogram count %llu, grammar %s%s, "
              "content type %s",
              static_cast<unsigned long long>(counted), kRequests, static_cast<unsigned long long>(hist_count),
              grammar ? "ok" : "violated at: ", bad.c_str(), content_type ? "ok" : "wrong")};
}

Verdict conformance(Context& ctx) {
  auto& mono = ctx.monolith();
  auto& micro = ctx.microservices(10);
  const auto dir = ctx.work / "conformance";
  fs::create_directories(dir);
  const auto golden_file = (dir / "golden.json").string();
  const int rc_golden = run_command({cli_path(), "golden", "--url", mono.url(), "--count", "20", "--seed", "31",
                                     "--out", golden_file},
                                    (dir / "golden.log").string(), {{"LOG_LEVEL", "warn"}});
  const int rc_pass = run_command({cli_path(), "conformance", "--url", micro.url(), "--golden", golden_file},
                                  (dir / "pass.log").string(), {{"LOG_LEVEL", "warn"}});

  // Every golden distance, perturbed by 10 m one at a time, must be caught.
  const auto golden = net::GoldenFile::load(golden_file);
  std::size_t perturbations = 0, caught = 0;
  for (const auto& c : golden.cases) {
    if (c.status != 200) continue;
    const auto actual = json::parse(net::http_post(micro.url(), "/plan", json(c.request).dump()).body);
    auto check = [&](const json& perturbed, const std::string& field) {
      ++perturbations;
      const auto diffs = net::compare_plans(perturbed, actual);
      if (diffs.size() == 1 && diffs[0].starts_with(field + ":")) ++caught;
    };
    auto p = c.expected;
    p["total_distance_m"] = p["total_distance_m"].get<std::int64_t>() + 10;
    check(p, "total_distance_m");
    for (std::size_t r = 0; r < c.expected["routes"].size(); ++r) {
      auto q = c.expected;
      q["routes"][r]["distance_m"] = q["routes"][r]["distance_m"].get<std::int64_t>() + 10;
      check(q, "routes[" + std::to_string(r) + "].distance_m");
    }
  }
  // End to end through the CLI with one perturbed file.
  auto broken = golden;
  for (auto& c : broken.cases) {
    if (c.status == 200) {
      c.expected["routes"][0]["distance_m"] = c.expected["routes"][0]["distance_m"].get<std::int64_t>() + 10;
      break;
    }
  }
  broken.save((dir / "perturbed.json").string());
  const int rc_fail = run_command({cli_path(), "conformance", "--url", micro.url(), "--golden",
                                   (dir / "perturbed.json").string()},
                                  (dir / "fail.log").string(), {{"LOG_LEVEL", "warn"}});
  const bool diff_logged = read_file(dir / "fail.log").find("routes[0].distance_m: expected") != std::string::npos;
  const bool pass = rc_golden == 0 && rc_pass == 0 && perturbations > 0 && caught == perturbations && rc_fail == 1 &&
                    diff_logged;
  return {pass, fmt("golden from monolith vs 10-replica deployment: exit %d; %zu/%zu single 10 m perturbations "
                    "caught with a field diff; perturbed file exit %d, diff logged %s",
                    rc_pass, caught, perturbations, rc_fail, diff_logged ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> only, skip;
  fs::path work = fs::temp_directory_path() / ("gridplan_acceptance_" + std::to_string(::getpid()));
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--only") only.insert(argv[i + 1]);
    if (flag == "--skip") skip.insert(argv[i + 1]);
    if (flag == "--workdir") work = argv[i + 1];
  }
  fs::create_directories(work);
  spdlog::set_level(spdlog::level::warn);

  const std::vector<std::pair<std::string, std::function<Verdict(Context&)>>> criteria{
      {"pathfinding_oracle", pathfinding_oracle}, {"vrp_oracle", vrp_oracle},
      {"graph_construction", graph_construction}, {"mode_equivalence", mode_equivalence},
      {"concurrency_contract", concurrency_contract}, {"performance_trend", performance_trend},
      {"benchmark_accounting", benchmark_accounting}, {"metrics", metrics},
      {"conformance", conformance},
  };

  Context ctx;
  ctx.work = work;
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    if ((!only.empty() && !only.contains(name)) || skip.contains(name)) continue;
    Verdict v;
    try {
      v = fn(ctx);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
    failures += v.pass ? 0 : 1;
  }
  std::cout << "work directory: " << work.string() << std::endl;
  return failures == 0 ? 0 : 1;
}
