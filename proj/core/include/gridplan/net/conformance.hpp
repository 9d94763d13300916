#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridplan/graph.hpp"
#include "gridplan/mission.hpp"

namespace gridplan::net {

/// One golden case: a request and the deployment's answer to it.
struct GoldenCase {
  MissionRequest request;
  int status = 200;
  nlohmann::json expected;  // MissionPlan for 200, error body otherwise
};

struct GoldenFile {
  std::vector<GoldenCase> cases;

  nlohmann::json to_json() const;
  static GoldenFile from_json(const nlohmann::json& j);
  static GoldenFile load(const std::string& path);
  void save(const std::string& path) const;
};

/// Seeded random requests over the graph's nodes: 1..max_uavs UAVs on node
/// positions and 1..max_targets distinct target nodes.
std::vector<MissionRequest> random_requests(const InfrastructureGraph& graph, std::size_t count,
                                            std::uint64_t seed, std::size_t max_uavs = 4,
                                            std::size_t max_targets = 8);

/// POSTs each request to url/plan and records the answers.
GoldenFile record_golden(const std::string& url, const std::vector<MissionRequest>& requests);

/// Polls url/healthz until it answers 200. Throws kReadinessTimeout.
void wait_ready(const std::string& url, std::chrono::milliseconds timeout);

struct CaseResult {
  std::size_t index = 0;
  bool passed = true;
  std::vector<std::string> diffs;  // "routes[0].distance_m: expected 812, got 822"
};

struct ConformanceReport {
  std::vector<CaseResult> cases;
  bool passed() const;
  std::size_t failures() const;
};

/// Field-by-field plan comparison: visit orders, UAV indices and waypoint
/// counts exact, distances within 1 m, waypoint coordinates within 1e-7 deg.
std::vector<std::string> compare_plans(const nlohmann::json& expected, const nlohmann::json& actual);

/// Replays the golden cases against url after readiness polling.
ConformanceReport run_conformance(const std::string& url, const GoldenFile& golden,
                                  std::chrono::milliseconds readiness_timeout = std::chrono::seconds(60));

}  // namespace gridplan::net
