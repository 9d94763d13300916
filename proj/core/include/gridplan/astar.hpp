#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gridplan/geo.hpp"
#include "gridplan/graph.hpp"

namespace gridplan {

struct PathResult {
  std::vector<NodeId> node_ids;  // source first, target last
  std::vector<GeoPoint> points;
  std::vector<double> segment_costs_m;
  double total_cost_m = 0.0;

  /// The same path walked from target to source.
  PathResult reversed() const;

  friend bool operator==(const PathResult&, const PathResult&) = default;
};

/// Compressed adjacency over an InfrastructureGraph. Dense indices follow
/// ascending node id, so comparing indices compares ids.
class SearchGraph {
 public:
  explicit SearchGraph(const InfrastructureGraph& graph, double cell_deg = 0.01);

  std::size_t size() const noexcept { return ids_.size(); }
  std::optional<std::uint32_t> index_of(NodeId id) const;
  NodeId id_at(std::uint32_t i) const { return ids_[i]; }
  const GeoPoint& point_at(std::uint32_t i) const { return points_[i]; }
  const GridIndex& index() const noexcept { return grid_; }

  struct Arc {
    std::uint32_t to;
    double cost_m;
  };
  std::span<const Arc> arcs(std::uint32_t i) const {
    return {arcs_.data() + offsets_[i], arcs_.data() + offsets_[i + 1]};
  }

 private:
  std::vector<NodeId> ids_;
  std::vector<GeoPoint> points_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Arc> arcs_;
  GridIndex grid_;
};

struct SearchStats {
  std::size_t expanded = 0;  // nodes settled (popped and closed)
};

/// Minimum-cost path by A* with the great-circle heuristic. Among equal-cost
/// paths the lexicographically smallest node-id sequence is returned.
/// Throws kUnknownNode for ids outside the graph and kUnreachable (as
/// UnreachablePathError) when no path exists.
PathResult astar_shortest_path(const SearchGraph& graph, NodeId source, NodeId target,
                               SearchStats* stats = nullptr);

PathResult astar_shortest_path(const InfrastructureGraph& graph, NodeId source, NodeId target,
                               SearchStats* stats = nullptr);

}  // namespace gridplan
