#include "gridplan/astar.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>

#include "gridplan/error.hpp"

namespace gridplan {

namespace {

// Every edge costs at least the great-circle distance between its
// endpoints. Scaling the heuristic by a hair below one keeps it consistent
// when costs were rounded to micrometres in the graph file.
constexpr double kHeuristicScale = 1.0 - 1e-6;
constexpr std::uint32_t kNoPred = std::numeric_limits<std::uint32_t>::max();

struct QueueEntry {
  double f;
  double g;
  std::uint32_t node;

  bool operator>(const QueueEntry& o) const { return std::tie(f, g, node) > std::tie(o.f, o.g, o.node); }
};

}  // namespace

PathResult PathResult::reversed() const {
  PathResult r;
  r.node_ids.assign(node_ids.rbegin(), node_ids.rend());
  r.points.assign(points.rbegin(), points.rend());
  r.segment_costs_m.assign(segment_costs_m.rbegin(), segment_costs_m.rend());
  r.total_cost_m = total_cost_m;
  return r;
}

SearchGraph::SearchGraph(const InfrastructureGraph& graph, double cell_deg) : grid_(cell_deg) {
  ids_.reserve(graph.node_count());
  points_.reserve(graph.node_count());
  for (const auto& [id, p] : graph.nodes()) {
    ids_.push_back(id);
    points_.push_back(p);
    grid_.insert(id, p);
  }
  std::vector<std::uint32_t> degree(ids_.size(), 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ends;
  ends.reserve(graph.edge_count());
  for (const auto& e : graph.edges()) {
    const auto u = *index_of(e.u);
    const auto v = *index_of(e.v);
    ends.emplace_back(u, v);
    ++degree[u];
    ++degree[v];
  }
  offsets_.assign(ids_.size() + 1, 0);
  for (std::size_t i = 0; i < ids_.size(); ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  arcs_.resize(offsets_.back());
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t k = 0; k < ends.size(); ++k) {
    const auto [u, v] = ends[k];
    const double c = graph.edges()[k].cost_m;
    arcs_[fill[u]++] = Arc{v, c};
    arcs_[fill[v]++] = Arc{u, c};
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    std::sort(arcs_.begin() + offsets_[i], arcs_.begin() + offsets_[i + 1],
              [](const Arc& a, const Arc& b) { return a.to < b.to; });
  }
}

std::optional<std::uint32_t> SearchGraph::index_of(NodeId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - ids_.begin());
}

PathResult astar_shortest_path(const SearchGraph& graph, NodeId source, NodeId target, SearchStats* stats) {
  const auto s = graph.index_of(source);
  const auto t = graph.index_of(target);
  if (!s) throw Error(ErrorCode::kUnknownNode, "unknown node " + std::to_string(source));
  if (!t) throw Error(ErrorCode::kUnknownNode, "unknown node " + std::to_string(target));

  const auto n = graph.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> g(n, inf);
  std::vector<std::uint32_t> pred(n, kNoPred);
  std::vector<double> pred_cost(n, 0.0);
  std::vector<char> closed(n, 0);
  const GeoPoint& goal = graph.point_at(*t);
  auto h = [&](std::uint32_t i) { return kHeuristicScale * haversine_distance(graph.point_at(i), goal); };

  // Prefix of the current best path to `i`, source first.
  std::vector<std::uint32_t> buf_a, buf_b;
  auto prefix = [&](std::uint32_t i, std::vector<std::uint32_t>& out) {
    out.clear();
    for (; i != kNoPred; i = pred[i]) out.push_back(i);
    std::reverse(out.begin(), out.end());
  };

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
  g[*s] = 0.0;
  open.push({h(*s), 0.0, *s});
  std::size_t expanded = 0;
  bool found = false;
  while (!open.empty()) {
    const auto top = open.top();
    open.pop();
    if (top.g > g[top.node] || closed[top.node]) continue;
    closed[top.node] = 1;
    ++expanded;
    if (top.node == *t) {
      found = true;
      break;
    }
    for (const auto& arc : graph.arcs(top.node)) {
      const double ng = g[top.node] + arc.cost_m;
      if (ng < g[arc.to]) {
        g[arc.to] = ng;
        pred[arc.to] = top.node;
        pred_cost[arc.to] = arc.cost_m;
        closed[arc.to] = 0;
        open.push({ng + h(arc.to), ng, arc.to});
      } else if (ng == g[arc.to] && arc.to != *s && pred[arc.to] != top.node) {
        // Equal-cost alternative: keep the lexicographically smaller prefix.
        prefix(top.node, buf_a);
        prefix(pred[arc.to], buf_b);
        if (std::lexicographical_compare(buf_a.begin(), buf_a.end(), buf_b.begin(), buf_b.end())) {
          pred[arc.to] = top.node;
          pred_cost[arc.to] = arc.cost_m;
        }
      }
    }
  }
  if (stats) stats->expanded = expanded;
  if (!found) throw UnreachablePathError(source, target);

  std::vector<std::uint32_t> path;
  prefix(*t, path);
  PathResult result;
  result.node_ids.reserve(path.size());
  result.points.reserve(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) {
    result.node_ids.push_back(graph.id_at(path[k]));
    result.points.push_back(graph.point_at(path[k]));
    if (k > 0) {
      result.segment_costs_m.push_back(pred_cost[path[k]]);
      result.total_cost_m += pred_cost[path[k]];
    }
  }
  return result;
}

PathResult astar_shortest_path(const InfrastructureGraph& graph, NodeId source, NodeId target,
                               SearchStats* stats) {
  return astar_shortest_path(SearchGraph(graph), source, target, stats);
}

}  // namespace gridplan
