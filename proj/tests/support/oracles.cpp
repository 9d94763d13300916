#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <queue>

namespace gridplan::testing {

DijkstraResult dijkstra(const InfrastructureGraph& graph, NodeId source, NodeId target) {
  std::map<NodeId, std::vector<std::pair<NodeId, double>>> adj;
  for (const auto& e : graph.edges()) {
    adj[e.u].emplace_back(e.v, e.cost_m);
    adj[e.v].emplace_back(e.u, e.cost_m);
  }
  std::map<NodeId, double> dist;
  std::set<NodeId> done;
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  DijkstraResult r;
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done.contains(u) || d > dist[u]) continue;
    done.insert(u);
    ++r.expanded;
    if (u == target) {
      r.cost = d;
      return r;
    }
    for (const auto& [v, c] : adj[u]) {
      const double nd = d + c;
      const auto it = dist.find(v);
      if (it == dist.end() || nd < it->second) {
        dist[v] = nd;
        heap.push({nd, v});
      }
    }
  }
  return r;
}

InfrastructureGraph random_connected_graph(std::mt19937_64& rng, std::size_t n, double penalty,
                                           double extra_edge_ratio) {
  std::uniform_real_distribution<double> lat(55.30, 55.48), lon(10.20, 10.50), unit(0.0, 1.0);
  std::map<NodeId, GeoPoint> nodes;
  std::vector<NodeId> ids;
  NodeId next = 1000;
  for (std::size_t i = 0; i < n; ++i) {
    next += 1 + static_cast<NodeId>(rng() % 5);
    nodes.emplace(next, GeoPoint(quantize6(lat(rng)), quantize6(lon(rng))));
    ids.push_back(next);
  }
  std::set<NodePair> used;
  std::vector<Edge> edges;
  auto add = [&](NodeId a, NodeId b, bool direct) {
    if (a == b) return;
    const NodePair key{std::min(a, b), std::max(a, b)};
    if (!used.insert(key).second) return;
    const double d = haversine_distance(nodes.at(a), nodes.at(b));
    edges.push_back(Edge{key.first, key.second, direct ? d : penalty * d,
                         direct ? EdgeKind::kDirect : EdgeKind::kIndirect});
  };
  // Spanning tree: each node links to its nearest of a few random predecessors.
  for (std::size_t i = 1; i < n; ++i) {
    NodeId best = ids[rng() % i];
    for (int k = 0; k < 3; ++k) {
      const NodeId cand = ids[rng() % i];
      if (haversine_distance(nodes.at(ids[i]), nodes.at(cand)) < haversine_distance(nodes.at(ids[i]), nodes.at(best))) {
        best = cand;
      }
    }
    add(ids[i], best, unit(rng) < 0.7);
  }
  const auto extra = static_cast<std::size_t>(extra_edge_ratio * static_cast<double>(n));
  for (std::size_t k = 0; k < extra; ++k) add(ids[rng() % n], ids[rng() % n], unit(rng) < 0.5);
  return InfrastructureGraph(std::move(nodes), std::move(edges));
}

std::int64_t brute_force_vrp(const CostMatrix& m, std::size_t vehicles, bool closed) {
  const auto T = m.targets;
  std::int64_t best = CostMatrix::kInfinity;
  std::vector<std::size_t> owner(T, 0);
  std::function<void(std::size_t)> assign = [&](std::size_t k) {
    if (k < T) {
      for (std::size_t v = 0; v < vehicles; ++v) {
        owner[k] = v;
        assign(k + 1);
      }
      return;
    }
    std::int64_t total = 0;
    for (std::size_t v = 0; v < vehicles && total < CostMatrix::kInfinity; ++v) {
      std::vector<std::size_t> mine;
      for (std::size_t t = 0; t < T; ++t) {
        if (owner[t] == v) mine.push_back(t);
      }
      std::int64_t best_order = CostMatrix::kInfinity;
      do {
        std::int64_t c = 0;
        std::size_t at = v;
        for (auto t : mine) {
          const auto step = m.at(at, m.target_entity(t));
          if (step >= CostMatrix::kInfinity) {
            c = CostMatrix::kInfinity;
            break;
          }
          c += step;
          at = m.target_entity(t);
        }
        if (closed && c < CostMatrix::kInfinity && !mine.empty()) {
          const auto back = m.at(at, v);
          c = back >= CostMatrix::kInfinity ? CostMatrix::kInfinity : c + back;
        }
        best_order = std::min(best_order, c);
      } while (std::next_permutation(mine.begin(), mine.end()));
      total = best_order >= CostMatrix::kInfinity ? CostMatrix::kInfinity : total + best_order;
    }
    best = std::min(best, total);
  };
  assign(0);
  return best;
}

std::vector<Neighbor> linear_geo_near(const InfraStore& store, const GeoPoint& p, double radius_m) {
  std::vector<Neighbor> out;
  for (const auto& t : store.towers()) {
    const double d = haversine_distance(p, t.location);
    if (d <= radius_m) out.push_back(Neighbor{t.id, d});
  }
  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.distance_m != b.distance_m ? a.distance_m < b.distance_m : a.id < b.id;
  });
  return out;
}

std::set<NodePair> pairwise_indirect(const InfraStore& store, const std::set<NodePair>& direct, double radius_m) {
  std::set<NodePair> out;
  const auto& towers = store.towers();
  for (std::size_t i = 0; i < towers.size(); ++i) {
    for (std::size_t j = i + 1; j < towers.size(); ++j) {
      const NodePair key{std::min(towers[i].id, towers[j].id), std::max(towers[i].id, towers[j].id)};
      if (direct.contains(key)) continue;
      if (haversine_distance(towers[i].location, towers[j].location) <= radius_m) out.insert(key);
    }
  }
  return out;
}

}  // namespace gridplan::testing
