#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace gridplan::net {

enum class Role { kIngest, kGraph, kPathfinder, kSolver, kMonolith };

std::string_view to_string(Role role);
Role role_from_string(std::string_view s);  // throws kConfigError

struct ServiceConfig {
  Role role = Role::kMonolith;
  std::string host = "127.0.0.1";
  int listen_port = 8080;
  std::map<std::string, std::vector<std::string>> upstreams;  // "pathfinder", "graph" -> URLs
  std::string store_path;  // ingest, graph, monolith
  std::string graph_file;  // pathfinder, monolith: prebuilt graph file
  double penalty_factor = 3.0;
  double indirect_radius_m = 500.0;
  double snap_radius_m = 5000.0;
  std::size_t max_in_flight = 32;
  std::uint64_t seed = 0;
  bool return_to_start = false;
  int refresh_interval_s = 0;  // graph role: periodic rebuild, 0 = off
  std::size_t worker_threads = 16;
  int upstream_timeout_s = 60;

  const std::vector<std::string>& upstream(const std::string& role) const;

  /// Throws kConfigError when the role's inputs are missing or out of range.
  void validate() const;
};

using EnvLookup = std::function<const char*(const char*)>;

ServiceConfig config_from_json(const nlohmann::json& j);

/// Applies ROLE, LISTEN_HOST, LISTEN_PORT, STORE_PATH, GRAPH_FILE, GRAPH_URL,
/// PATHFINDER_URLS (comma list), SNAP_RADIUS_M, PENALTY_FACTOR,
/// INDIRECT_RADIUS_M, MAX_IN_FLIGHT, SEED, RETURN_TO_START,
/// REFRESH_INTERVAL_S and WORKER_THREADS on top of `cfg`.
void apply_env(ServiceConfig& cfg, const EnvLookup& env);

/// Reads the JSON file, applies the process environment and validates.
ServiceConfig load_config(const std::filesystem::path& file, const EnvLookup& env = nullptr);

}  // namespace gridplan::net
