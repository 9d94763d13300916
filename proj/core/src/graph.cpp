#include "gridplan/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "gridplan/error.hpp"

namespace gridplan {

using nlohmann::json;

std::string_view to_string(EdgeKind kind) {
  return kind == EdgeKind::kDirect ? "direct" : "indirect";
}

namespace {

std::string fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

double parse_fixed(const json& v, const char* what) {
  if (!v.is_string()) throw Error(ErrorCode::kCorruptGraphFile, std::string(what) + " must be a decimal string");
  const auto& s = v.get_ref<const std::string&>();
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(d)) {
    throw Error(ErrorCode::kCorruptGraphFile, std::string(what) + " is not a number: " + s);
  }
  return d;
}

void validate_edge(const std::map<NodeId, GeoPoint>& nodes, const Edge& e) {
  if (e.u == e.v) throw Error(ErrorCode::kInvalidArgument, "self loop on node " + std::to_string(e.u));
  if (!nodes.contains(e.u) || !nodes.contains(e.v)) {
    throw Error(ErrorCode::kInvalidArgument,
                "edge endpoint missing: " + std::to_string(e.u) + "-" + std::to_string(e.v));
  }
  if (!(e.cost_m > 0.0) || !std::isfinite(e.cost_m)) {
    throw Error(ErrorCode::kInvalidArgument, "edge cost must be positive");
  }
}

bool edge_less(const Edge& a, const Edge& b) {
  return a.u != b.u ? a.u < b.u : a.v < b.v;
}

}  // namespace

double quantize6(double value) { return std::strtod(fixed6(value).c_str(), nullptr); }

InfrastructureGraph::InfrastructureGraph(std::map<NodeId, GeoPoint> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    validate_edge(nodes_, e);
  }
  std::sort(edges_.begin(), edges_.end(), edge_less);
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i - 1].u == edges_[i].u && edges_[i - 1].v == edges_[i].v) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate edge " + std::to_string(edges_[i].u) + "-" +
                                                   std::to_string(edges_[i].v));
    }
  }
}

void InfrastructureGraph::add_node(NodeId id, const GeoPoint& p) { nodes_.insert_or_assign(id, p); }

void InfrastructureGraph::add_edge(NodeId a, NodeId b, double cost_m, EdgeKind kind) {
  Edge e{std::min(a, b), std::max(a, b), cost_m, kind};
  validate_edge(nodes_, e);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e, edge_less);
  if (it != edges_.end() && it->u == e.u && it->v == e.v) {
    *it = e;
  } else {
    edges_.insert(it, e);
  }
}

const GeoPoint& InfrastructureGraph::location(NodeId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::kUnknownNode, "unknown node " + std::to_string(id));
  return it->second;
}

bool same_graph(const InfrastructureGraph& a, const InfrastructureGraph& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
  for (auto ia = a.nodes().begin(), ib = b.nodes().begin(); ia != a.nodes().end(); ++ia, ++ib) {
    if (ia->first != ib->first || fixed6(ia->second.lat()) != fixed6(ib->second.lat()) ||
        fixed6(ia->second.lon()) != fixed6(ib->second.lon())) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.edge_count(); ++i) {
    const auto& ea = a.edges()[i];
    const auto& eb = b.edges()[i];
    if (ea.u != eb.u || ea.v != eb.v || ea.kind != eb.kind || fixed6(ea.cost_m) != fixed6(eb.cost_m)) {
      return false;
    }
  }
  return true;
}

std::vector<NodePair> derive_direct_neighbors(const std::vector<osm::PowerLine>& lines,
                                              const std::set<NodeId>& tower_ids) {
  std::vector<NodePair> pairs;
  for (const auto& line : lines) {
    NodeId prev = 0;
    bool have_prev = false;
    for (auto ref : line.node_refs) {
      if (!tower_ids.contains(ref)) continue;
      if (have_prev && prev != ref) pairs.emplace_back(std::min(prev, ref), std::max(prev, ref));
      prev = ref;
      have_prev = true;
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

std::vector<NodePair> derive_indirect_neighbors(const InfraStore& store, const std::set<NodePair>& direct,
                                                double radius_m) {
  if (!(radius_m > 0.0)) throw Error(ErrorCode::kInvalidArgument, "indirect radius must be positive");
  std::vector<NodePair> pairs;
  for (const auto& tower : store.towers()) {
    for (const auto& hit : store.geo_near_ids(tower.location, radius_m)) {
      if (hit.id <= tower.id) continue;
      NodePair p{tower.id, hit.id};
      if (!direct.contains(p)) pairs.push_back(p);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

InfrastructureGraph build_graph(const InfraStore& store, const GraphOptions& options) {
  if (store.towers().empty()) throw Error(ErrorCode::kEmptyStore, "store holds no towers");
  if (!(options.penalty_factor >= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "penalty_factor must be >= 1");
  }

  // Coordinates are quantized to the graph file precision so an in-memory
  // graph and its serialized form describe the same positions.
  std::map<NodeId, GeoPoint> nodes;
  std::set<NodeId> tower_ids;
  for (const auto& t : store.towers()) {
    nodes.emplace(t.id, GeoPoint(quantize6(t.location.lat()), quantize6(t.location.lon())));
    tower_ids.insert(t.id);
  }

  std::vector<Edge> edges;
  std::size_t skipped = 0;
  auto emit = [&](NodeId a, NodeId b, EdgeKind kind) {
    const double d = haversine_distance(nodes.at(a), nodes.at(b));
    if (!(d > 0.0)) {
      ++skipped;  // co-located towers
      return;
    }
    edges.push_back(Edge{a, b, kind == EdgeKind::kDirect ? d : options.penalty_factor * d, kind});
  };

  const auto direct = derive_direct_neighbors(store.power_lines(), tower_ids);
  for (const auto& [a, b] : direct) emit(a, b, EdgeKind::kDirect);
  const std::set<NodePair> direct_set(direct.begin(), direct.end());
  for (const auto& [a, b] : derive_indirect_neighbors(store, direct_set, options.indirect_radius_m)) {
    emit(a, b, EdgeKind::kIndirect);
  }

  if (options.merge_bridges) {
    for (const auto& bridge : store.bridges()) {
      const NodeId id = -bridge.id;
      const auto c = bridge.centroid();
      const GeoPoint centroid(quantize6(c.lat()), quantize6(c.lon()));
      nodes.emplace(id, centroid);
      for (const auto& hit : store.geo_near_ids(centroid, options.indirect_radius_m)) {
        emit(std::min(id, hit.id), std::max(id, hit.id), EdgeKind::kIndirect);
      }
    }
  }
  if (skipped > 0) spdlog::warn("build_graph: skipped {} zero-length tower pairs", skipped);
  return InfrastructureGraph(std::move(nodes), std::move(edges));
}

NodeId snap_to_nearest_node(const GeoPoint& p, const InfrastructureGraph& graph, double max_radius_m) {
  if (graph.node_count() == 0) throw Error(ErrorCode::kInvalidArgument, "cannot snap to an empty graph");
  if (!(max_radius_m > 0.0)) throw Error(ErrorCode::kInvalidArgument, "snap radius must be positive");
  NodeId best = 0;
  double best_d = 0.0;
  bool found = false;
  // std::map iterates ids ascending, so strict < keeps the smallest id on ties.
  for (const auto& [id, loc] : graph.nodes()) {
    const double d = haversine_distance(p, loc);
    if (!found || d < best_d) {
      best = id;
      best_d = d;
      found = true;
    }
  }
  if (best_d > max_radius_m) {
    throw Error(ErrorCode::kNoNodeInRange, "nearest node is " + std::to_string(best_d) + " m away");
  }
  return best;
}

NodeId snap_to_nearest_node(const GeoPoint& p, const GridIndex& index, double max_radius_m) {
  if (index.size() == 0) throw Error(ErrorCode::kInvalidArgument, "cannot snap to an empty graph");
  if (!(max_radius_m > 0.0)) throw Error(ErrorCode::kInvalidArgument, "snap radius must be positive");
  auto hit = index.nearest(p, max_radius_m);
  if (!hit) {
    throw Error(ErrorCode::kNoNodeInRange,
                "no node within " + std::to_string(max_radius_m) + " m of (" + std::to_string(p.lat()) +
                    ", " + std::to_string(p.lon()) + ")");
  }
  return hit->id;
}

std::string serialize_graph(const InfrastructureGraph& graph) {
  json nodes = json::array();
  for (const auto& [id, p] : graph.nodes()) {
    nodes.push_back({{"id", id}, {"lat", fixed6(p.lat())}, {"lon", fixed6(p.lon())}});
  }
  json edges = json::array();
  for (const auto& e : graph.edges()) {
    edges.push_back({{"u", e.u}, {"v", e.v}, {"cost_m", fixed6(e.cost_m)}, {"kind", to_string(e.kind)}});
  }
  json doc = {{"schema_version", kGraphSchemaVersion}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
  return doc.dump();
}

InfrastructureGraph deserialize_graph(std::string_view bytes) {
  const json doc = json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kCorruptGraphFile, "graph payload is not a JSON object");
  }
  try {
    if (doc.at("schema_version").get<int>() != kGraphSchemaVersion) {
      throw Error(ErrorCode::kCorruptGraphFile, "unsupported graph schema_version");
    }
    std::map<NodeId, GeoPoint> nodes;
    for (const auto& n : doc.at("nodes")) {
      const auto id = n.at("id").get<NodeId>();
      const GeoPoint p(parse_fixed(n.at("lat"), "lat"), parse_fixed(n.at("lon"), "lon"));
      if (!nodes.emplace(id, p).second) {
        throw Error(ErrorCode::kCorruptGraphFile, "duplicate node " + std::to_string(id));
      }
    }
    std::vector<Edge> edges;
    edges.reserve(doc.at("edges").size());
    for (const auto& e : doc.at("edges")) {
      const auto kind = e.at("kind").get<std::string>();
      if (kind != "direct" && kind != "indirect") {
        throw Error(ErrorCode::kCorruptGraphFile, "unknown edge kind " + kind);
      }
      edges.push_back(Edge{e.at("u").get<NodeId>(), e.at("v").get<NodeId>(), parse_fixed(e.at("cost_m"), "cost_m"),
                           kind == "direct" ? EdgeKind::kDirect : EdgeKind::kIndirect});
    }
    return InfrastructureGraph(std::move(nodes), std::move(edges));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptGraphFile, std::string("malformed graph: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorruptGraphFile) throw;
    throw Error(ErrorCode::kCorruptGraphFile, std::string("invalid graph: ") + e.what());
  }
}

}  // namespace gridplan
