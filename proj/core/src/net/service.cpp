#include "gridplan/net/service.hpp"

#include <httplib.h>

#include <chrono>
#include <condition_variable>
#include <csignal>
#include <optional>
#include <set>
#include <thread>

#include <spdlog/spdlog.h>

#include "gridplan/codec.hpp"
#include "gridplan/error.hpp"
#include "gridplan/graph.hpp"
#include "gridplan/infra_store.hpp"
#include "gridplan/net/client.hpp"

namespace gridplan::net {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

constexpr const char* kJson = "application/json";

thread_local std::optional<Clock::time_point> request_start;

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return 400;
    case ErrorCode::kUnknownNode: return 404;
    case ErrorCode::kNoNodeInRange:
    case ErrorCode::kUnreachable:
    case ErrorCode::kUnreachableTargets:
    case ErrorCode::kInfeasible: return 422;
    case ErrorCode::kMalformedResponse: return 502;
    case ErrorCode::kGraphUnavailable:
    case ErrorCode::kPathServiceUnavailable:
    case ErrorCode::kAllReplicasFailed:
    case ErrorCode::kTransportError: return 503;
    default: return 500;
  }
}

void write_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void write_error(httplib::Response& res, ErrorCode code, const std::string& message, json extra = json::object()) {
  extra["error"] = std::string(to_string(code));
  extra["message"] = message;
  write_json(res, status_for(code), extra);
}

std::string fetch_graph_over_http(RoundRobinClient& client) {
  auto resp = client.get("/graph");
  if (resp.status != 200) {
    throw Error(ErrorCode::kTransportError, "graph service answered " + std::to_string(resp.status));
  }
  return std::move(resp.body);
}

}  // namespace

struct Service::Impl {
  explicit Impl(ServiceConfig c) : cfg(std::move(c)), metrics(std::string(to_string(cfg.role))) {}

  ServiceConfig cfg;
  MetricsRegistry metrics;
  httplib::Server server;
  std::set<std::string> routes;
  int bound_port = 0;
  std::jthread serve_thread;

  // ingest / graph / monolith with a store
  std::mutex store_mutex;
  std::shared_ptr<const InfraStore> store;

  // graph role
  std::mutex graph_mutex;
  std::shared_ptr<const std::string> graph_bytes;
  std::size_t graph_nodes = 0, graph_edges = 0;
  std::size_t rebuild_job = 0;
  std::string rebuild_state = "idle";
  std::string rebuild_error;
  std::jthread rebuild_thread;
  std::jthread refresh_thread;
  std::condition_variable_any refresh_cv;

  // pathfinder / monolith / solver
  std::unique_ptr<RoundRobinClient> graph_upstream;
  std::unique_ptr<PathService> paths;
  std::unique_ptr<PathClient> path_client;

  std::mutex stop_mutex;
  std::condition_variable stop_cv;
  bool stopped = false;

  bool has(Role r) const { return cfg.role == r || cfg.role == Role::kMonolith; }

  GraphOptions graph_options() const {
    GraphOptions o;
    o.penalty_factor = cfg.penalty_factor;
    o.indirect_radius_m = cfg.indirect_radius_m;
    return o;
  }

  std::shared_ptr<const InfraStore> current_store() {
    std::lock_guard lock(store_mutex);
    return store;
  }

  void load_inputs();
  void rebuild_graph();
  void start_rebuild();
  void mount();

  template <typename Fn>
  void route(const std::string& method, const std::string& path, Fn fn);
};

void Service::Impl::load_inputs() {
  const bool needs_store = cfg.role == Role::kIngest || cfg.role == Role::kGraph ||
                           (cfg.role == Role::kMonolith && !cfg.store_path.empty());
  if (needs_store) {
    store = std::make_shared<const InfraStore>(load_store(cfg.store_path));
    spdlog::info("store loaded from {}: {} towers", cfg.store_path, store->towers().size());
  }
  if (cfg.role == Role::kGraph) rebuild_graph();

  if (has(Role::kPathfinder)) {
    PathService::GraphFetcher fetch;
    if (!cfg.graph_file.empty()) {
      fetch = graph_file_fetcher(cfg.graph_file);
    } else if (cfg.role == Role::kMonolith) {
      fetch = [this] { return serialize_graph(build_graph(*current_store(), graph_options())); };
    } else {
      graph_upstream = std::make_unique<RoundRobinClient>(cfg.upstream("graph"),
                                                          std::chrono::seconds(cfg.upstream_timeout_s));
      fetch = [this] { return fetch_graph_over_http(*graph_upstream); };
    }
    paths = std::make_unique<PathService>(std::move(fetch), cfg.snap_radius_m);
  }
  if (cfg.role == Role::kMonolith) {
    path_client = std::make_unique<LocalPathClient>(*paths);
  } else if (cfg.role == Role::kSolver) {
    path_client = std::make_unique<HttpPathClient>(cfg.upstream("pathfinder"),
                                                   std::chrono::seconds(cfg.upstream_timeout_s));
  }
}

void Service::Impl::rebuild_graph() {
  auto fresh = std::make_shared<const InfraStore>(load_store(cfg.store_path));
  const auto graph = build_graph(*fresh, graph_options());
  auto bytes = std::make_shared<const std::string>(serialize_graph(graph));
  {
    std::lock_guard lock(store_mutex);
    store = std::move(fresh);
  }
  std::lock_guard lock(graph_mutex);
  graph_bytes = std::move(bytes);
  graph_nodes = graph.node_count();
  graph_edges = graph.edge_count();
  spdlog::info("graph built: {} nodes, {} edges", graph_nodes, graph_edges);
}

void Service::Impl::start_rebuild() {
  // Caller holds graph_mutex.
  ++rebuild_job;
  rebuild_state = "running";
  rebuild_error.clear();
  if (rebuild_thread.joinable()) rebuild_thread.join();
  rebuild_thread = std::jthread([this] {
    std::string state = "done", error;
    try {
      rebuild_graph();
    } catch (const std::exception& e) {
      state = "failed";
      error = e.what();
      spdlog::error("graph rebuild failed: {}", error);
    }
    std::lock_guard lock(graph_mutex);
    rebuild_state = state;
    rebuild_error = error;
  });
}

template <typename Fn>
void Service::Impl::route(const std::string& method, const std::string& path, Fn fn) {
  routes.insert(path);
  auto guarded = [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const UnreachableTargetsError& e) {
      write_error(res, e.code(), e.what(), json{{"targets", e.targets()}});
    } catch (const Error& e) {
      write_error(res, e.code(), e.what());
    } catch (const json::exception& e) {
      write_error(res, ErrorCode::kInvalidArgument, std::string("bad request body: ") + e.what());
    } catch (const std::exception& e) {
      write_json(res, 500, json{{"error", "Internal"}, {"message", e.what()}});
    }
  };
  if (method == "GET") {
    server.Get(path, guarded);
  } else {
    server.Post(path, guarded);
  }
}

void Service::Impl::mount() {
  server.set_pre_routing_handler([](const httplib::Request&, httplib::Response&) {
    request_start = Clock::now();
    return httplib::Server::HandlerResponse::Unhandled;
  });
  // Runs before the response is written, so a client never observes its own
  // request missing from the counters.
  server.set_post_routing_handler([this](const httplib::Request& req, const httplib::Response& res) {
    const double seconds =
        request_start ? std::chrono::duration<double>(Clock::now() - *request_start).count() : 0.0;
    request_start.reset();
    metrics.observe(routes.contains(req.path) ? req.path : "other", res.status, seconds);
  });

  route("GET", "/healthz", [this](const httplib::Request&, httplib::Response& res) {
    if (paths) {
      try {
        paths->graph();
      } catch (const Error& e) {
        write_error(res, ErrorCode::kGraphUnavailable, e.what());
        return;
      }
    }
    write_json(res, 200, json{{"status", "ok"}, {"role", to_string(cfg.role)}});
  });
  route("GET", "/metrics", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(metrics.exposition(), MetricsRegistry::kContentType);
  });
  route("GET", "/info", [this](const httplib::Request&, httplib::Response& res) {
    const bool mono = cfg.role == Role::kMonolith;
    write_json(res, 200,
               json{{"role", to_string(cfg.role)},
                    {"mode", mono ? "monolith" : "microservices"},
                    {"replicas", mono ? 1 : std::max<std::size_t>(1, cfg.upstream("pathfinder").size())},
                    {"max_in_flight", mono ? 1 : cfg.max_in_flight}});
  });

  if (store && has(Role::kIngest)) {
    route("GET", "/towers", [this](const httplib::Request& req, httplib::Response& res) {
      const auto s = current_store();
      std::vector<osm::OsmNode> towers;
      if (req.has_param("bbox")) {
        towers = s->towers_in(BoundingBox::parse(req.get_param_value("bbox")));
      } else {
        towers = s->towers();
      }
      write_json(res, 200, json(towers));
    });
    route("GET", "/powerlines", [this](const httplib::Request&, httplib::Response& res) {
      write_json(res, 200, json(current_store()->power_lines()));
    });
    route("GET", "/railways", [this](const httplib::Request&, httplib::Response& res) {
      write_json(res, 200, json(current_store()->railway_nodes()));
    });
    route("GET", "/bridges", [this](const httplib::Request&, httplib::Response& res) {
      write_json(res, 200, json(current_store()->bridges()));
    });
  }

  if (cfg.role == Role::kGraph) {
    route("GET", "/graph", [this](const httplib::Request&, httplib::Response& res) {
      std::shared_ptr<const std::string> bytes;
      {
        std::lock_guard lock(graph_mutex);
        bytes = graph_bytes;
      }
      res.set_content(*bytes, kJson);
    });
    route("POST", "/graph/rebuild", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(graph_mutex);
      if (rebuild_state != "running") start_rebuild();
      write_json(res, 202, json{{"job", rebuild_job}, {"state", rebuild_state}});
    });
    route("GET", "/graph/rebuild", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(graph_mutex);
      json body{{"job", rebuild_job}, {"state", rebuild_state}, {"nodes", graph_nodes}, {"edges", graph_edges}};
      if (!rebuild_error.empty()) body["message"] = rebuild_error;
      write_json(res, 200, body);
    });
  } else if (cfg.role == Role::kMonolith) {
    route("GET", "/graph", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(serialize_graph(paths->graph()->graph), kJson);
    });
  }

  if (paths) {
    route("POST", "/path", [this](const httplib::Request& req, httplib::Response& res) {
      const auto request = path_request_from_json(json::parse(req.body));
      const auto g = paths->graph();
      const NodeId source = paths->resolve(*g, request.source);
      const NodeId target = paths->resolve(*g, request.target);
      try {
        write_json(res, 200, json(astar_shortest_path(g->search, source, target)));
      } catch (const UnreachablePathError& e) {
        write_error(res, ErrorCode::kUnreachable, e.what(),
                    json{{"source_node", source},
                         {"source_point", g->graph.location(source)},
                         {"target_node", target},
                         {"target_point", g->graph.location(target)}});
      }
    });
    route("POST", "/cache/invalidate", [this](const httplib::Request&, httplib::Response& res) {
      paths->invalidate();
      write_json(res, 200, json{{"status", "invalidated"}});
    });
  }

  if (path_client) {
    route("POST", "/plan", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = json::parse(req.body);
      if (!body.contains("seed")) body["seed"] = cfg.seed;
      const auto request = body.get<MissionRequest>();
      PlanOptions options;
      options.assembly.max_in_flight = cfg.role == Role::kMonolith ? 1 : cfg.max_in_flight;
      options.vrp.return_to_start = cfg.return_to_start;
      res.set_content(plan_to_string(plan_mission(request, *path_client, options)), kJson);
    });
  }
}

Service::Service(ServiceConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}

Service::~Service() { stop(); }

void Service::start() {
  auto& d = *impl_;
  d.cfg.validate();
  d.load_inputs();
  d.mount();
  const auto threads = d.cfg.worker_threads;
  d.server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  // httplib defaults to SO_REUSEPORT, which lets a second process share a
  // taken port silently. Plain SO_REUSEADDR makes that a bind error.
  d.server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  if (d.cfg.listen_port == 0) {
    d.bound_port = d.server.bind_to_any_port(d.cfg.host);
  } else {
    d.bound_port = d.server.bind_to_port(d.cfg.host, d.cfg.listen_port) ? d.cfg.listen_port : -1;
  }
  if (d.bound_port <= 0) {
    throw Error(ErrorCode::kBindError,
                "cannot bind " + d.cfg.host + ":" + std::to_string(d.cfg.listen_port));
  }
  d.serve_thread = std::jthread([&d] { d.server.listen_after_bind(); });
  d.server.wait_until_ready();

  if (d.cfg.role == Role::kGraph && d.cfg.refresh_interval_s > 0) {
    d.refresh_thread = std::jthread([&d](std::stop_token st) {
      std::mutex m;
      std::unique_lock lock(m);
      while (!d.refresh_cv.wait_for(lock, st, std::chrono::seconds(d.cfg.refresh_interval_s),
                                    [] { return false; })) {
        if (st.stop_requested()) return;
        std::lock_guard g(d.graph_mutex);
        if (d.rebuild_state != "running") d.start_rebuild();
      }
    });
  }
  spdlog::info("{} listening on {}:{}", to_string(d.cfg.role), d.cfg.host, d.bound_port);
}

void Service::stop() {
  auto& d = *impl_;
  if (d.refresh_thread.joinable()) {
    d.refresh_thread.request_stop();
    d.refresh_thread.join();
  }
  if (d.server.is_running()) d.server.stop();
  if (d.serve_thread.joinable()) d.serve_thread.join();
  if (d.rebuild_thread.joinable()) d.rebuild_thread.join();
  {
    std::lock_guard lock(d.stop_mutex);
    d.stopped = true;
  }
  d.stop_cv.notify_all();
}

void Service::wait() {
  std::unique_lock lock(impl_->stop_mutex);
  impl_->stop_cv.wait(lock, [this] { return impl_->stopped; });
}

int Service::port() const { return impl_->bound_port; }
const ServiceConfig& Service::config() const { return impl_->cfg; }
const MetricsRegistry& Service::metrics() const { return impl_->metrics; }
PathService* Service::path_service() { return impl_->paths.get(); }

int run_service(const ServiceConfig& cfg) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);  // inherited by server threads

  Service service(cfg);
  service.start();
  int sig = 0;
  sigwait(&set, &sig);
  spdlog::info("signal {} received, shutting down", sig);
  service.stop();
  return 0;
}

}  // namespace gridplan::net
