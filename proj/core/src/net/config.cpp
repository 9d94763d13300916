#include "gridplan/net/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>

#include "gridplan/error.hpp"
#include "gridplan/net/url.hpp"

namespace gridplan::net {

using nlohmann::json;

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kIngest: return "ingest";
    case Role::kGraph: return "graph";
    case Role::kPathfinder: return "pathfinder";
    case Role::kSolver: return "solver";
    case Role::kMonolith: return "monolith";
  }
  return "monolith";
}

Role role_from_string(std::string_view s) {
  for (auto r : {Role::kIngest, Role::kGraph, Role::kPathfinder, Role::kSolver, Role::kMonolith}) {
    if (to_string(r) == s) return r;
  }
  throw Error(ErrorCode::kConfigError, "unknown role '" + std::string(s) + "'");
}

const std::vector<std::string>& ServiceConfig::upstream(const std::string& role) const {
  static const std::vector<std::string> kNone;
  const auto it = upstreams.find(role);
  return it == upstreams.end() ? kNone : it->second;
}

void ServiceConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kConfigError, msg); };
  if (listen_port < 0 || listen_port > 65535) fail("listen_port out of range");
  if (!(penalty_factor >= 1.0)) fail("penalty_factor must be >= 1");
  if (!(indirect_radius_m > 0.0)) fail("indirect_radius_m must be positive");
  if (!(snap_radius_m > 0.0)) fail("snap_radius_m must be positive");
  if (max_in_flight == 0) fail("max_in_flight must be >= 1");
  if (worker_threads == 0) fail("worker_threads must be >= 1");
  if (refresh_interval_s < 0) fail("refresh_interval_s must be >= 0");
  for (const auto& [name, urls] : upstreams) {
    for (const auto& u : urls) Url::parse(u);
  }
  switch (role) {
    case Role::kIngest:
    case Role::kGraph:
      if (store_path.empty()) fail(std::string(to_string(role)) + " role needs store_path");
      break;
    case Role::kPathfinder:
      if (graph_file.empty() && upstream("graph").empty()) fail("pathfinder role needs graph_file or a graph upstream");
      break;
    case Role::kSolver:
      if (upstream("pathfinder").empty()) fail("solver role needs pathfinder upstreams");
      break;
    case Role::kMonolith:
      if (graph_file.empty() && store_path.empty()) fail("monolith role needs graph_file or store_path");
      break;
  }
}

ServiceConfig config_from_json(const json& j) {
  ServiceConfig c;
  try {
    if (j.contains("role")) c.role = role_from_string(j.at("role").get<std::string>());
    c.host = j.value("host", c.host);
    c.listen_port = j.value("listen_port", c.listen_port);
    if (j.contains("upstreams")) {
      for (const auto& [name, v] : j.at("upstreams").items()) {
        c.upstreams[name] = v.is_string() ? std::vector<std::string>{v.get<std::string>()}
                                          : v.get<std::vector<std::string>>();
      }
    }
    c.store_path = j.value("store_path", c.store_path);
    c.graph_file = j.value("graph_file", c.graph_file);
    c.penalty_factor = j.value("penalty_factor", c.penalty_factor);
    c.indirect_radius_m = j.value("indirect_radius_m", c.indirect_radius_m);
    c.snap_radius_m = j.value("snap_radius_m", c.snap_radius_m);
    c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    c.seed = j.value("seed", c.seed);
    c.return_to_start = j.value("return_to_start", c.return_to_start);
    c.refresh_interval_s = j.value("refresh_interval_s", c.refresh_interval_s);
    c.worker_threads = j.value("worker_threads", c.worker_threads);
    c.upstream_timeout_s = j.value("upstream_timeout_s", c.upstream_timeout_s);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("bad config: ") + e.what());
  }
  return c;
}

namespace {

template <typename T>
T parse_number(const char* name, const std::string& text) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end) {
    throw Error(ErrorCode::kConfigError, std::string(name) + ": not a number: '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

void apply_env(ServiceConfig& c, const EnvLookup& env) {
  auto get = [&](const char* name) -> std::optional<std::string> {
    const char* v = env(name);
    if (!v) return std::nullopt;
    return std::string(v);
  };
  if (auto v = get("ROLE")) c.role = role_from_string(*v);
  if (auto v = get("LISTEN_HOST")) c.host = *v;
  if (auto v = get("LISTEN_PORT")) c.listen_port = parse_number<int>("LISTEN_PORT", *v);
  if (auto v = get("STORE_PATH")) c.store_path = *v;
  if (auto v = get("GRAPH_FILE")) c.graph_file = *v;
  if (auto v = get("GRAPH_URL")) c.upstreams["graph"] = split_list(*v);
  if (auto v = get("PATHFINDER_URLS")) c.upstreams["pathfinder"] = split_list(*v);
  if (auto v = get("SNAP_RADIUS_M")) c.snap_radius_m = parse_number<double>("SNAP_RADIUS_M", *v);
  if (auto v = get("PENALTY_FACTOR")) c.penalty_factor = parse_number<double>("PENALTY_FACTOR", *v);
  if (auto v = get("INDIRECT_RADIUS_M")) c.indirect_radius_m = parse_number<double>("INDIRECT_RADIUS_M", *v);
  if (auto v = get("MAX_IN_FLIGHT")) c.max_in_flight = parse_number<std::size_t>("MAX_IN_FLIGHT", *v);
  if (auto v = get("SEED")) c.seed = parse_number<std::uint64_t>("SEED", *v);
  if (auto v = get("RETURN_TO_START")) c.return_to_start = (*v == "1" || *v == "true");
  if (auto v = get("REFRESH_INTERVAL_S")) c.refresh_interval_s = parse_number<int>("REFRESH_INTERVAL_S", *v);
  if (auto v = get("WORKER_THREADS")) c.worker_threads = parse_number<std::size_t>("WORKER_THREADS", *v);
}

ServiceConfig load_config(const std::filesystem::path& file, const EnvLookup& env) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot read config " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, "config " + file.string() + " is not valid JSON: " + e.what());
  }
  auto cfg = config_from_json(j);
  apply_env(cfg, env ? env : EnvLookup([](const char* n) { return std::getenv(n); }));
  cfg.validate();
  return cfg;
}

}  // namespace gridplan::net
