#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gridplan/geo.hpp"
#include "gridplan/infra_store.hpp"

namespace gridplan {

inline constexpr int kGraphSchemaVersion = 1;

enum class EdgeKind { kDirect, kIndirect };

std::string_view to_string(EdgeKind kind);

/// Undirected weighted edge, stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double cost_m = 0.0;
  EdgeKind kind = EdgeKind::kDirect;

  friend bool operator==(const Edge&, const Edge&) = default;
};

using NodePair = std::pair<NodeId, NodeId>;  // canonical: first < second

/// Towers as nodes, neighbor relations as edges. Edges are kept sorted by
/// (u, v) with at most one edge per unordered pair and no self loops.
class InfrastructureGraph {
 public:
  InfrastructureGraph() = default;
  /// Bulk construction; validates like add_edge and rejects duplicate pairs.
  InfrastructureGraph(std::map<NodeId, GeoPoint> nodes, std::vector<Edge> edges);

  void add_node(NodeId id, const GeoPoint& p);
  /// Adds or replaces the edge for {a, b}. Throws kInvalidArgument on self
  /// loops, unknown endpoints or non-positive cost.
  void add_edge(NodeId a, NodeId b, double cost_m, EdgeKind kind);

  const std::map<NodeId, GeoPoint>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool contains(NodeId id) const { return nodes_.contains(id); }
  const GeoPoint& location(NodeId id) const;

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

 private:
  std::map<NodeId, GeoPoint> nodes_;
  std::vector<Edge> edges_;
};

/// Equality as observed through the graph file: node ids, coordinates and
/// costs compared in their fixed 6-decimal serialized form.
bool same_graph(const InfrastructureGraph& a, const InfrastructureGraph& b);

/// Consecutive tower pairs along each line after dropping non-tower refs,
/// canonicalized and deduplicated across lines.
std::vector<NodePair> derive_direct_neighbors(const std::vector<osm::PowerLine>& lines,
                                              const std::set<NodeId>& tower_ids);

/// Every unordered tower pair within radius_m that is not a direct pair.
std::vector<NodePair> derive_indirect_neighbors(const InfraStore& store,
                                                const std::set<NodePair>& direct, double radius_m);

struct GraphOptions {
  double penalty_factor = 3.0;
  double indirect_radius_m = 500.0;
  bool merge_bridges = false;
};

/// Builds the planning graph. Direct edges cost the haversine distance,
/// indirect edges penalty_factor times it. Throws kEmptyStore without towers.
InfrastructureGraph build_graph(const InfraStore& store, const GraphOptions& options = {});

/// Snaps p to the closest graph node (ties: smallest id) by linear scan.
/// Throws kNoNodeInRange if that node is farther than max_radius_m.
NodeId snap_to_nearest_node(const GeoPoint& p, const InfrastructureGraph& graph, double max_radius_m);

/// Same contract, answered from a prebuilt index over the graph's nodes.
NodeId snap_to_nearest_node(const GeoPoint& p, const GridIndex& index, double max_radius_m);

std::string serialize_graph(const InfrastructureGraph& graph);
/// Throws kCorruptGraphFile on malformed input.
InfrastructureGraph deserialize_graph(std::string_view bytes);

/// Rounds through the fixed 6-decimal representation used by the graph file.
double quantize6(double value);

}  // namespace gridplan
