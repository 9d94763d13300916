#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <variant>

#include "gridplan/astar.hpp"
#include "gridplan/graph.hpp"

namespace gridplan {

/// A path endpoint: a graph node, or a free position snapped to the nearest node.
using PathEndpoint = std::variant<NodeId, GeoPoint>;

struct PathRequest {
  PathEndpoint source;
  PathEndpoint target;
};

/// Graph as held by a pathfinder: the file-form graph plus its search index.
struct LoadedGraph {
  explicit LoadedGraph(InfrastructureGraph g) : graph(std::move(g)), search(graph) {}

  InfrastructureGraph graph;
  SearchGraph search;
};

/// Answers path requests against a graph obtained from `fetch` on first use.
///
/// The fetch runs at most once per successful load: concurrent first callers
/// wait on the same load. A failed load is retried once before the request
/// fails with kGraphUnavailable; the next request starts over.
class PathService {
 public:
  /// Returns the serialized graph (graph file format); throws on failure.
  using GraphFetcher = std::function<std::string()>;

  explicit PathService(GraphFetcher fetch, double snap_radius_m = 5000.0);

  PathResult handle(const PathRequest& request);

  /// Resolves an endpoint to a graph node id (snapping free positions).
  NodeId resolve(const LoadedGraph& graph, const PathEndpoint& endpoint) const;

  std::shared_ptr<const LoadedGraph> graph();
  bool ready() const;
  void invalidate();

  std::size_t fetch_attempts() const noexcept { return fetch_attempts_.load(); }
  double snap_radius_m() const noexcept { return snap_radius_m_; }

 private:
  GraphFetcher fetch_;
  double snap_radius_m_;
  mutable std::mutex mutex_;
  std::shared_ptr<const LoadedGraph> cached_;
  std::atomic<std::size_t> fetch_attempts_{0};
};

/// Fetcher reading a graph file from disk.
PathService::GraphFetcher graph_file_fetcher(std::string path);

}  // namespace gridplan
