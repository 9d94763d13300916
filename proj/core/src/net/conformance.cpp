#include "gridplan/net/conformance.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <thread>

#include "gridplan/codec.hpp"
#include "gridplan/error.hpp"
#include "gridplan/net/client.hpp"

namespace gridplan::net {

using nlohmann::json;

json GoldenFile::to_json() const {
  json list = json::array();
  for (const auto& c : cases) {
    list.push_back({{"request", c.request}, {"status", c.status}, {"expected", c.expected}});
  }
  return json{{"cases", list}};
}

GoldenFile GoldenFile::from_json(const json& j) {
  GoldenFile g;
  for (const auto& c : j.at("cases")) {
    g.cases.push_back(GoldenCase{c.at("request").get<MissionRequest>(), c.at("status").get<int>(), c.at("expected")});
  }
  return g;
}

GoldenFile GoldenFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read golden file " + path);
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIoError, "bad golden file " + path + ": " + e.what());
  }
}

void GoldenFile::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write golden file " + path);
  out << to_json().dump(1) << '\n';
}

std::vector<MissionRequest> random_requests(const InfrastructureGraph& graph, std::size_t count, std::uint64_t seed,
                                            std::size_t max_uavs, std::size_t max_targets) {
  std::vector<NodeId> ids;
  std::vector<GeoPoint> points;
  for (const auto& [id, p] : graph.nodes()) {
    ids.push_back(id);
    points.push_back(p);
  }
  if (ids.size() < max_uavs + max_targets) {
    throw Error(ErrorCode::kGraphTooSmall, "graph too small for the requested mission sizes");
  }
  std::mt19937_64 rng(seed);
  std::vector<MissionRequest> out;
  for (std::size_t n = 0; n < count; ++n) {
    const auto uavs = 1 + rng() % max_uavs;
    const auto targets = 1 + rng() % max_targets;
    std::vector<std::size_t> perm(ids.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    for (std::size_t i = 0; i < uavs + targets; ++i) std::swap(perm[i], perm[i + rng() % (perm.size() - i)]);
    MissionRequest r;
    r.seed = rng() % 1000;
    for (std::size_t i = 0; i < uavs; ++i) r.uavs.push_back(points[perm[i]]);
    for (std::size_t i = uavs; i < uavs + targets; ++i) r.targets.push_back(ids[perm[i]]);
    out.push_back(std::move(r));
  }
  return out;
}

GoldenFile record_golden(const std::string& url, const std::vector<MissionRequest>& requests) {
  GoldenFile g;
  for (const auto& r : requests) {
    const auto resp = http_post(url, "/plan", json(r).dump());
    g.cases.push_back(GoldenCase{r, resp.status, json::parse(resp.body)});
  }
  return g;
}

void wait_ready(const std::string& url, std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::string last = "no answer";
  while (true) {
    try {
      const auto resp = http_get(url, "/healthz", std::chrono::seconds(10));
      if (resp.status == 200) return;
      last = "status " + std::to_string(resp.status);
    } catch (const Error& e) {
      last = e.what();
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      throw Error(ErrorCode::kReadinessTimeout, url + " not ready: " + last);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
}

namespace {

std::string show(const json& v) { return v.dump(); }

void diff_near(std::vector<std::string>& out, const std::string& field, const json& e, const json& a, double tol) {
  if (!e.is_number() || !a.is_number()) {
    if (e != a) out.push_back(field + ": expected " + show(e) + ", got " + show(a));
    return;
  }
  if (std::fabs(e.get<double>() - a.get<double>()) > tol) {
    out.push_back(field + ": expected " + show(e) + ", got " + show(a));
  }
}

void diff_exact(std::vector<std::string>& out, const std::string& field, const json& e, const json& a) {
  if (e != a) out.push_back(field + ": expected " + show(e) + ", got " + show(a));
}

}  // namespace

std::vector<std::string> compare_plans(const json& expected, const json& actual) {
  std::vector<std::string> out;
  diff_near(out, "total_distance_m", expected.value("total_distance_m", json()), actual.value("total_distance_m", json()),
            1.0);
  const auto& er = expected.at("routes");
  const auto& ar = actual.contains("routes") ? actual.at("routes") : json::array();
  if (er.size() != ar.size()) {
    out.push_back("routes: expected " + std::to_string(er.size()) + " entries, got " + std::to_string(ar.size()));
    return out;
  }
  for (std::size_t i = 0; i < er.size(); ++i) {
    const auto base = "routes[" + std::to_string(i) + "].";
    const auto& e = er[i];
    const auto& a = ar[i];
    diff_exact(out, base + "uav_index", e.at("uav_index"), a.value("uav_index", json()));
    diff_exact(out, base + "visit_order", e.at("visit_order"), a.value("visit_order", json()));
    diff_near(out, base + "distance_m", e.at("distance_m"), a.value("distance_m", json()), 1.0);
    const auto& ew = e.at("waypoints");
    const auto aw = a.value("waypoints", json::array());
    if (ew.size() != aw.size()) {
      out.push_back(base + "waypoints: expected " + std::to_string(ew.size()) + " entries, got " +
                    std::to_string(aw.size()));
      continue;
    }
    for (std::size_t k = 0; k < ew.size(); ++k) {
      const auto wp = base + "waypoints[" + std::to_string(k) + "].";
      diff_near(out, wp + "lat", ew[k].at("lat"), aw[k].value("lat", json()), 1e-7);
      diff_near(out, wp + "lon", ew[k].at("lon"), aw[k].value("lon", json()), 1e-7);
    }
  }
  return out;
}

bool ConformanceReport::passed() const { return failures() == 0; }

std::size_t ConformanceReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : cases) n += c.passed ? 0 : 1;
  return n;
}

ConformanceReport run_conformance(const std::string& url, const GoldenFile& golden,
                                  std::chrono::milliseconds readiness_timeout) {
  wait_ready(url, readiness_timeout);
  ConformanceReport report;
  for (std::size_t i = 0; i < golden.cases.size(); ++i) {
    const auto& c = golden.cases[i];
    CaseResult r{i, true, {}};
    const auto resp = http_post(url, "/plan", json(c.request).dump());
    json actual;
    try {
      actual = json::parse(resp.body);
    } catch (const json::exception&) {
      r.diffs.push_back("body: not JSON");
    }
    if (resp.status != c.status) {
      r.diffs.push_back("status: expected " + std::to_string(c.status) + ", got " + std::to_string(resp.status));
    } else if (r.diffs.empty()) {
      if (c.status == 200) {
        r.diffs = compare_plans(c.expected, actual);
      } else {
        diff_exact(r.diffs, "error", c.expected.value("error", json()), actual.value("error", json()));
        diff_exact(r.diffs, "targets", c.expected.value("targets", json()), actual.value("targets", json()));
      }
    }
    r.passed = r.diffs.empty();
    report.cases.push_back(std::move(r));
  }
  return report;
}

}  // namespace gridplan::net
