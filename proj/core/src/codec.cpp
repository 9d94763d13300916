#include "gridplan/codec.hpp"

#include "gridplan/error.hpp"

namespace gridplan {

using nlohmann::json;

void to_json(json& j, const GeoPoint& p) { j = json{{"lat", p.lat()}, {"lon", p.lon()}}; }

void from_json(const json& j, GeoPoint& p) { p = GeoPoint(j.at("lat").get<double>(), j.at("lon").get<double>()); }

void to_json(json& j, const PathResult& r) {
  j = json{{"node_ids", r.node_ids},
           {"points", r.points},
           {"segment_costs_m", r.segment_costs_m},
           {"total_cost_m", r.total_cost_m}};
}

void from_json(const json& j, PathResult& r) {
  r.node_ids = j.at("node_ids").get<std::vector<NodeId>>();
  r.points = j.at("points").get<std::vector<GeoPoint>>();
  r.segment_costs_m = j.at("segment_costs_m").get<std::vector<double>>();
  r.total_cost_m = j.at("total_cost_m").get<double>();
  if (r.points.size() != r.node_ids.size() || r.node_ids.empty() ||
      r.segment_costs_m.size() + 1 != r.node_ids.size()) {
    throw Error(ErrorCode::kInvalidArgument, "inconsistent path result");
  }
}

void to_json(json& j, const MissionRequest& r) {
  j = json{{"uavs", r.uavs}, {"targets", r.targets}, {"seed", r.seed}};
}

void from_json(const json& j, MissionRequest& r) {
  r.uavs = j.at("uavs").get<std::vector<GeoPoint>>();
  r.targets = j.at("targets").get<std::vector<NodeId>>();
  r.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 0;
}

void to_json(json& j, const MissionRoute& r) {
  j = json{{"uav_index", r.uav_index},
           {"visit_order", r.visit_order},
           {"waypoints", r.waypoints},
           {"distance_m", r.distance_m}};
}

void from_json(const json& j, MissionRoute& r) {
  r.uav_index = j.at("uav_index").get<std::size_t>();
  r.visit_order = j.at("visit_order").get<std::vector<NodeId>>();
  r.waypoints = j.at("waypoints").get<std::vector<GeoPoint>>();
  r.distance_m = j.at("distance_m").get<std::int64_t>();
}

void to_json(json& j, const MissionPlan& p) {
  j = json{{"routes", p.routes}, {"total_distance_m", p.total_distance_m}};
}

void from_json(const json& j, MissionPlan& p) {
  p.routes = j.at("routes").get<std::vector<MissionRoute>>();
  p.total_distance_m = j.at("total_distance_m").get<std::int64_t>();
}

json endpoint_to_json(const PathEndpoint& e) {
  if (const auto* id = std::get_if<NodeId>(&e)) return json{{"node", *id}};
  return json{{"point", std::get<GeoPoint>(e)}};
}

PathEndpoint endpoint_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "endpoint must be an object");
  const bool has_node = j.contains("node");
  const bool has_point = j.contains("point");
  if (has_node == has_point) {
    throw Error(ErrorCode::kInvalidArgument, "endpoint needs exactly one of \"node\" or \"point\"");
  }
  if (has_node) return j.at("node").get<NodeId>();
  return j.at("point").get<GeoPoint>();
}

json path_request_to_json(const PathRequest& r) {
  return json{{"source", endpoint_to_json(r.source)}, {"target", endpoint_to_json(r.target)}};
}

PathRequest path_request_from_json(const json& j) {
  return PathRequest{endpoint_from_json(j.at("source")), endpoint_from_json(j.at("target"))};
}

std::string plan_to_string(const MissionPlan& plan) { return json(plan).dump(); }

}  // namespace gridplan

namespace gridplan::osm {

using nlohmann::json;

void to_json(json& j, const OsmNode& n) {
  j = json{{"id", n.id}, {"lat", n.location.lat()}, {"lon", n.location.lon()}, {"tags", n.tags}};
}

void from_json(const json& j, OsmNode& n) {
  n.id = j.at("id").get<NodeId>();
  n.location = GeoPoint(j.at("lat").get<double>(), j.at("lon").get<double>());
  n.tags = j.value("tags", Tags{});
}

void to_json(json& j, const PowerLine& l) {
  j = json{{"id", l.id}, {"nodes", l.node_refs}, {"tags", l.tags}};
}

void from_json(const json& j, PowerLine& l) {
  l.id = j.at("id").get<std::int64_t>();
  l.node_refs = j.at("nodes").get<std::vector<NodeId>>();
  l.tags = j.value("tags", Tags{});
}

void to_json(json& j, const BridgePolygon& b) {
  j = json{{"id", b.id}, {"nodes", b.node_refs}, {"ring", b.ring}, {"tags", b.tags}};
}

void from_json(const json& j, BridgePolygon& b) {
  b.id = j.at("id").get<std::int64_t>();
  b.node_refs = j.at("nodes").get<std::vector<NodeId>>();
  b.ring = j.at("ring").get<std::vector<GeoPoint>>();
  b.tags = j.value("tags", Tags{});
  if (b.ring.size() != b.node_refs.size() || b.node_refs.size() < 4 || b.node_refs.front() != b.node_refs.back()) {
    throw Error(ErrorCode::kInvalidArgument, "bridge " + std::to_string(b.id) + " is not a closed ring");
  }
}

}  // namespace gridplan::osm
