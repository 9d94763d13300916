#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridplan/geo.hpp"

namespace gridplan::osm {

using Tags = std::map<std::string, std::string>;

struct OsmNode {
  NodeId id = 0;
  GeoPoint location;
  Tags tags;

  friend bool operator==(const OsmNode&, const OsmNode&) = default;
};

struct PowerLine {
  std::int64_t id = 0;
  std::vector<NodeId> node_refs;  // source way order, at least two refs
  Tags tags;

  friend bool operator==(const PowerLine&, const PowerLine&) = default;
};

/// Closed ring (node_refs.front() == node_refs.back()). `ring` holds the
/// resolved position of each ref so the polygon is self-contained.
struct BridgePolygon {
  std::int64_t id = 0;
  std::vector<NodeId> node_refs;
  std::vector<GeoPoint> ring;
  Tags tags;

  GeoPoint centroid() const;

  friend bool operator==(const BridgePolygon&, const BridgePolygon&) = default;
};

struct OverpassEndpoint {
  std::string url;  // e.g. https://overpass-api.de/api/interpreter
  std::chrono::seconds timeout{180};
};

/// A recorded Overpass response (`{"elements": [...]}`) read from disk.
struct FixtureFile {
  std::filesystem::path path;
};

using ElementSource = std::variant<OverpassEndpoint, FixtureFile>;

/// "http://..." / "https://..." become endpoints, anything else a fixture path.
ElementSource parse_source(const std::string& location);

enum class Feature { kPower, kRailway, kBridge };

/// Overpass QL for the feature, parameterized only by the bbox.
std::string overpass_query(Feature feature, const BoundingBox& bbox);

/// Runs the feature query and returns the raw `elements` array. Fixture
/// sources apply the same selection the query would (tagged nodes inside the
/// box, tagged ways touching it, plus every node those ways reference) and
/// pass the selected elements through unmodified.
nlohmann::json fetch_elements(Feature feature, const BoundingBox& bbox, const ElementSource& source);

inline nlohmann::json fetch_power_infrastructure(const BoundingBox& bbox, const ElementSource& source) {
  return fetch_elements(Feature::kPower, bbox, source);
}

inline nlohmann::json fetch_railways(const BoundingBox& bbox, const ElementSource& source) {
  return fetch_elements(Feature::kRailway, bbox, source);
}

struct PowerElements {
  std::vector<OsmNode> towers;
  std::vector<OsmNode> line_nodes;
  std::vector<PowerLine> lines;
  std::vector<std::string> discarded;  // one reason per dropped element
};

/// Splits raw power elements into towers, non-tower line nodes and lines.
/// Throws kDanglingReference when a line refers to a node absent from `raw`.
PowerElements parse_elements(const nlohmann::json& raw);

struct RailwayElements {
  std::vector<OsmNode> nodes;
  std::vector<std::string> discarded;
};

RailwayElements parse_railways(const nlohmann::json& raw);

struct BridgeElements {
  std::vector<BridgePolygon> polygons;
  std::vector<std::string> warnings;  // open ways are skipped with a warning
};

BridgeElements parse_bridges(const nlohmann::json& raw);

BridgeElements fetch_bridges(const BoundingBox& bbox, const ElementSource& source);

}  // namespace gridplan::osm
