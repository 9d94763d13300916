#pragma once

// JSON wire forms of the domain types (nlohmann ADL hooks). Ids are JSON
// integers, coordinates decimal degrees.

#include <nlohmann/json.hpp>

#include "gridplan/astar.hpp"
#include "gridplan/geo.hpp"
#include "gridplan/mission.hpp"
#include "gridplan/osm.hpp"
#include "gridplan/path_service.hpp"

namespace gridplan {

void to_json(nlohmann::json& j, const GeoPoint& p);
void from_json(const nlohmann::json& j, GeoPoint& p);

void to_json(nlohmann::json& j, const PathResult& r);
void from_json(const nlohmann::json& j, PathResult& r);

void to_json(nlohmann::json& j, const MissionRequest& r);
void from_json(const nlohmann::json& j, MissionRequest& r);

void to_json(nlohmann::json& j, const MissionRoute& r);
void from_json(const nlohmann::json& j, MissionRoute& r);

void to_json(nlohmann::json& j, const MissionPlan& p);
void from_json(const nlohmann::json& j, MissionPlan& p);

/// {"node": id} or {"point": {"lat": .., "lon": ..}}
nlohmann::json endpoint_to_json(const PathEndpoint& e);
PathEndpoint endpoint_from_json(const nlohmann::json& j);

nlohmann::json path_request_to_json(const PathRequest& r);
PathRequest path_request_from_json(const nlohmann::json& j);

/// Canonical MissionPlan bytes; equal plans always serialize identically.
std::string plan_to_string(const MissionPlan& plan);

}  // namespace gridplan

namespace gridplan::osm {

void to_json(nlohmann::json& j, const OsmNode& n);
void from_json(const nlohmann::json& j, OsmNode& n);

void to_json(nlohmann::json& j, const PowerLine& l);
void from_json(const nlohmann::json& j, PowerLine& l);

void to_json(nlohmann::json& j, const BridgePolygon& b);
void from_json(const nlohmann::json& j, BridgePolygon& b);

}  // namespace gridplan::osm
