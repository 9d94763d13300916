#include "gridplan/osm.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "gridplan/error.hpp"
#include "gridplan/net/url.hpp"

namespace gridplan::osm {

using nlohmann::json;

GeoPoint BridgePolygon::centroid() const {
  // Ring is closed, the duplicated last vertex is excluded from the mean.
  const auto n = ring.size() > 1 ? ring.size() - 1 : ring.size();
  double lat = 0.0, lon = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lat += ring[i].lat();
    lon += ring[i].lon();
  }
  return GeoPoint(lat / static_cast<double>(n), lon / static_cast<double>(n));
}

ElementSource parse_source(const std::string& location) {
  if (location.starts_with("http://") || location.starts_with("https://")) {
    return OverpassEndpoint{location};
  }
  return FixtureFile{location};
}

std::string overpass_query(Feature feature, const BoundingBox& bbox) {
  std::ostringstream box;
  box.precision(7);
  box << std::fixed << bbox.south() << ',' << bbox.west() << ',' << bbox.north() << ','
      << bbox.east();
  const auto b = box.str();
  switch (feature) {
    case Feature::kPower:
      return "[out:json][timeout:180];(node[\"power\"=\"tower\"](" + b +
             ");way[\"power\"=\"line\"](" + b + "););(._;>;);out body;";
    case Feature::kRailway:
      return "[out:json][timeout:180];(node[\"railway\"](" + b + ");way[\"railway\"](" + b +
             "););(._;>;);out body;";
    case Feature::kBridge:
      return "[out:json][timeout:180];(way[\"man_made\"=\"bridge\"](" + b +
             "););(._;>;);out body;";
  }
  return {};
}

namespace {

json elements_of(const std::string& body, const std::string& origin) {
  json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("elements") ||
      !doc["elements"].is_array()) {
    throw Error(ErrorCode::kMalformedResponse, "not an Overpass JSON response: " + origin);
  }
  return std::move(doc["elements"]);
}

std::string tag(const json& element, const char* key) {
  if (auto t = element.find("tags"); t != element.end() && t->is_object()) {
    if (auto v = t->find(key); v != t->end() && v->is_string()) return v->get<std::string>();
  }
  return {};
}

bool has_tag(const json& element, const char* key) {
  if (auto t = element.find("tags"); t != element.end() && t->is_object()) return t->contains(key);
  return false;
}

bool node_selected(Feature f, const json& e) {
  switch (f) {
    case Feature::kPower: return tag(e, "power") == "tower";
    case Feature::kRailway: return has_tag(e, "railway");
    case Feature::kBridge: return false;
  }
  return false;
}

bool way_selected(Feature f, const json& e) {
  switch (f) {
    case Feature::kPower: return tag(e, "power") == "line";
    case Feature::kRailway: return has_tag(e, "railway");
    case Feature::kBridge: return tag(e, "man_made") == "bridge";
  }
  return false;
}

std::int64_t id_of(const json& e) {
  auto it = e.find("id");
  if (it == e.end() || !it->is_number_integer()) {
    throw Error(ErrorCode::kMalformedResponse, "element without integer id");
  }
  return it->get<std::int64_t>();
}

std::string type_of(const json& e) {
  if (!e.is_object()) throw Error(ErrorCode::kMalformedResponse, "element is not an object");
  auto it = e.find("type");
  if (it == e.end() || !it->is_string()) {
    throw Error(ErrorCode::kMalformedResponse, "element without type");
  }
  return it->get<std::string>();
}

GeoPoint location_of(const json& node) {
  auto lat = node.find("lat");
  auto lon = node.find("lon");
  if (lat == node.end() || lon == node.end() || !lat->is_number() || !lon->is_number()) {
    throw Error(ErrorCode::kMalformedResponse, "node " + std::to_string(id_of(node)) + " without lat/lon");
  }
  try {
    return GeoPoint(lat->get<double>(), lon->get<double>());
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedResponse, e.what());
  }
}

std::vector<NodeId> refs_of(const json& way) {
  auto it = way.find("nodes");
  if (it == way.end() || !it->is_array()) {
    throw Error(ErrorCode::kMalformedResponse, "way " + std::to_string(id_of(way)) + " without nodes");
  }
  std::vector<NodeId> refs;
  refs.reserve(it->size());
  for (const auto& r : *it) {
    if (!r.is_number_integer()) throw Error(ErrorCode::kMalformedResponse, "non-integer node ref");
    refs.push_back(r.get<NodeId>());
  }
  return refs;
}

Tags tags_of(const json& e) {
  Tags tags;
  if (auto t = e.find("tags"); t != e.end() && t->is_object()) {
    for (const auto& [k, v] : t->items()) {
      tags.emplace(k, v.is_string() ? v.get<std::string>() : v.dump());
    }
  }
  return tags;
}

json select_from_fixture(Feature feature, const BoundingBox& bbox, const json& elements) {
  std::unordered_map<NodeId, const json*> nodes;
  for (const auto& e : elements) {
    if (type_of(e) == "node") nodes.emplace(id_of(e), &e);
  }
  std::unordered_set<NodeId> keep_nodes;
  std::unordered_set<std::int64_t> keep_ways;
  for (const auto& e : elements) {
    const auto type = type_of(e);
    if (type == "node") {
      if (node_selected(feature, e) && bbox.contains(location_of(e))) keep_nodes.insert(id_of(e));
    } else if (type == "way" && way_selected(feature, e)) {
      const auto refs = refs_of(e);
      bool touches = false;
      for (auto r : refs) {
        auto it = nodes.find(r);
        if (it != nodes.end() && bbox.contains(location_of(*it->second))) {
          touches = true;
          break;
        }
      }
      if (touches) {
        keep_ways.insert(id_of(e));
        keep_nodes.insert(refs.begin(), refs.end());
      }
    }
  }
  json out = json::array();
  for (const auto& e : elements) {
    const auto type = type_of(e);
    if ((type == "node" && keep_nodes.contains(id_of(e))) ||
        (type == "way" && keep_ways.contains(id_of(e)))) {
      out.push_back(e);
    }
  }
  return out;
}

json fetch_remote(const OverpassEndpoint& endpoint, const std::string& query) {
  const auto url = net::Url::parse(endpoint.url);
  std::string last_error;
  for (int attempt = 0; attempt < 2; ++attempt) {
    httplib::Client client(url.origin);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(endpoint.timeout);
    httplib::Params params{{"data", query}};
    auto res = client.Post(url.path.empty() ? "/" : url.path, params);
    if (!res) {
      last_error = httplib::to_string(res.error());
    } else if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
    } else {
      return elements_of(res->body, endpoint.url);
    }
    spdlog::warn("overpass request to {} failed (attempt {}): {}", endpoint.url, attempt + 1, last_error);
  }
  throw Error(ErrorCode::kTransportError, "overpass request failed: " + last_error);
}

json fetch_fixture(const FixtureFile& fixture) {
  std::ifstream in(fixture.path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kTransportError, "cannot read fixture " + fixture.path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return elements_of(buf.str(), fixture.path.string());
}

// Resolves every ref of `way` against `nodes`, throwing on a dangling id.
template <class NodeMap>
void require_refs(const NodeMap& nodes, std::int64_t way_id, const std::vector<NodeId>& refs) {
  for (auto r : refs) {
    if (!nodes.contains(r)) {
      throw Error(ErrorCode::kDanglingReference,
                  "way " + std::to_string(way_id) + " references unknown node " + std::to_string(r));
    }
  }
}

}  // namespace

json fetch_elements(Feature feature, const BoundingBox& bbox, const ElementSource& source) {
  return std::visit(
      [&](const auto& src) -> json {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, OverpassEndpoint>) {
          return fetch_remote(src, overpass_query(feature, bbox));
        } else {
          return select_from_fixture(feature, bbox, fetch_fixture(src));
        }
      },
      source);
}

PowerElements parse_elements(const json& raw) {
  if (!raw.is_array()) throw Error(ErrorCode::kMalformedResponse, "elements must be an array");

  std::unordered_map<NodeId, const json*> nodes;
  std::vector<const json*> ways;
  PowerElements out;
  for (const auto& e : raw) {
    const auto type = type_of(e);
    if (type == "node") {
      if (!nodes.emplace(id_of(e), &e).second) {
        out.discarded.push_back("duplicate node " + std::to_string(id_of(e)));
      }
    } else if (type == "way") {
      ways.push_back(&e);
    } else {
      out.discarded.push_back(type + " " + std::to_string(id_of(e)) + ": unsupported element type");
    }
  }

  std::unordered_set<NodeId> on_lines;
  for (const json* w : ways) {
    const auto id = id_of(*w);
    if (tag(*w, "power") != "line") {
      out.discarded.push_back("way " + std::to_string(id) + ": not power=line");
      continue;
    }
    auto refs = refs_of(*w);
    require_refs(nodes, id, refs);
    if (refs.size() < 2) {
      out.discarded.push_back("way " + std::to_string(id) + ": fewer than two nodes");
      continue;
    }
    on_lines.insert(refs.begin(), refs.end());
    out.lines.push_back(PowerLine{id, std::move(refs), tags_of(*w)});
  }

  for (const auto& e : raw) {
    if (type_of(e) != "node") continue;
    const auto id = id_of(e);
    if (nodes.at(id) != &e) continue;  // duplicate, already reported
    if (tag(e, "power") == "tower") {
      out.towers.push_back(OsmNode{id, location_of(e), tags_of(e)});
    } else if (on_lines.contains(id)) {
      out.line_nodes.push_back(OsmNode{id, location_of(e), tags_of(e)});
    } else {
      out.discarded.push_back("node " + std::to_string(id) + ": neither tower nor on a power line");
    }
  }
  for (const auto& reason : out.discarded) spdlog::debug("parse_elements: {}", reason);
  return out;
}

RailwayElements parse_railways(const json& raw) {
  if (!raw.is_array()) throw Error(ErrorCode::kMalformedResponse, "elements must be an array");
  std::unordered_map<NodeId, const json*> nodes;
  for (const auto& e : raw) {
    if (type_of(e) == "node") nodes.emplace(id_of(e), &e);
  }
  RailwayElements out;
  std::unordered_set<NodeId> on_ways;
  for (const auto& e : raw) {
    if (type_of(e) != "way") continue;
    if (!has_tag(e, "railway")) {
      out.discarded.push_back("way " + std::to_string(id_of(e)) + ": not a railway");
      continue;
    }
    const auto refs = refs_of(e);
    require_refs(nodes, id_of(e), refs);
    on_ways.insert(refs.begin(), refs.end());
  }
  for (const auto& e : raw) {
    const auto type = type_of(e);
    if (type == "way") continue;
    if (type != "node") {
      out.discarded.push_back(type + " " + std::to_string(id_of(e)) + ": unsupported element type");
      continue;
    }
    const auto id = id_of(e);
    if (nodes.at(id) != &e) {
      out.discarded.push_back("duplicate node " + std::to_string(id));
    } else if (has_tag(e, "railway") || on_ways.contains(id)) {
      out.nodes.push_back(OsmNode{id, location_of(e), tags_of(e)});
    } else {
      out.discarded.push_back("node " + std::to_string(id) + ": not on a railway");
    }
  }
  return out;
}

BridgeElements parse_bridges(const json& raw) {
  if (!raw.is_array()) throw Error(ErrorCode::kMalformedResponse, "elements must be an array");
  std::unordered_map<NodeId, const json*> nodes;
  for (const auto& e : raw) {
    if (type_of(e) == "node") nodes.emplace(id_of(e), &e);
  }
  BridgeElements out;
  for (const auto& e : raw) {
    if (type_of(e) != "way") continue;
    const auto id = id_of(e);
    auto refs = refs_of(e);
    if (refs.size() < 4 || refs.front() != refs.back()) {
      out.warnings.push_back("bridge way " + std::to_string(id) + " is not a closed ring, skipped");
      spdlog::warn("{}", out.warnings.back());
      continue;
    }
    require_refs(nodes, id, refs);
    BridgePolygon polygon{id, std::move(refs), {}, tags_of(e)};
    polygon.ring.reserve(polygon.node_refs.size());
    for (auto r : polygon.node_refs) polygon.ring.push_back(location_of(*nodes.at(r)));
    out.polygons.push_back(std::move(polygon));
  }
  return out;
}

BridgeElements fetch_bridges(const BoundingBox& bbox, const ElementSource& source) {
  return parse_bridges(fetch_elements(Feature::kBridge, bbox, source));
}

}  // namespace gridplan::osm
