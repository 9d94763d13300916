#include "gridplan/path_service.hpp"

#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "gridplan/error.hpp"

namespace gridplan {

PathService::PathService(GraphFetcher fetch, double snap_radius_m)
    : fetch_(std::move(fetch)), snap_radius_m_(snap_radius_m) {
  if (!(snap_radius_m > 0.0)) throw Error(ErrorCode::kConfigError, "snap radius must be positive");
}

std::shared_ptr<const LoadedGraph> PathService::graph() {
  std::lock_guard lock(mutex_);
  if (cached_) return cached_;
  std::string last_error;
  for (int attempt = 0; attempt < 2; ++attempt) {
    ++fetch_attempts_;
    try {
      cached_ = std::make_shared<const LoadedGraph>(deserialize_graph(fetch_()));
      spdlog::info("graph loaded: {} nodes, {} edges", cached_->graph.node_count(),
                   cached_->graph.edge_count());
      return cached_;
    } catch (const std::exception& e) {
      last_error = e.what();
      spdlog::warn("graph fetch attempt {} failed: {}", attempt + 1, last_error);
    }
  }
  throw Error(ErrorCode::kGraphUnavailable, "graph unavailable: " + last_error);
}

bool PathService::ready() const {
  std::lock_guard lock(mutex_);
  return cached_ != nullptr;
}

void PathService::invalidate() {
  std::lock_guard lock(mutex_);
  cached_.reset();
}

NodeId PathService::resolve(const LoadedGraph& graph, const PathEndpoint& endpoint) const {
  if (const auto* id = std::get_if<NodeId>(&endpoint)) {
    if (!graph.graph.contains(*id)) throw Error(ErrorCode::kUnknownNode, "unknown node " + std::to_string(*id));
    return *id;
  }
  return snap_to_nearest_node(std::get<GeoPoint>(endpoint), graph.search.index(), snap_radius_m_);
}

PathResult PathService::handle(const PathRequest& request) {
  const auto g = graph();
  const NodeId source = resolve(*g, request.source);
  const NodeId target = resolve(*g, request.target);
  return astar_shortest_path(g->search, source, target);
}

PathService::GraphFetcher graph_file_fetcher(std::string path) {
  return [path = std::move(path)] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIoError, "cannot read graph file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
}

}  // namespace gridplan
