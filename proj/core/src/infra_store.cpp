#include "gridplan/infra_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "gridplan/codec.hpp"
#include "gridplan/error.hpp"

namespace gridplan {

using nlohmann::json;

namespace {

template <class T>
void merge_by_id(std::vector<T>& into, std::vector<T> extra) {
  into.insert(into.end(), std::make_move_iterator(extra.begin()), std::make_move_iterator(extra.end()));
  std::stable_sort(into.begin(), into.end(), [](const T& a, const T& b) { return a.id < b.id; });
  into.erase(std::unique(into.begin(), into.end(), [](const T& a, const T& b) { return a.id == b.id; }),
             into.end());
}

void write_json(const std::filesystem::path& file, const json& doc) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + file.string());
  out << doc.dump(1);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + file.string());
}

json read_json(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  json doc = json::parse(buf.str(), nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::kIoError, "corrupted store file " + file.string());
  return doc;
}

constexpr const char* kCollections[] = {"towers", "line_nodes", "power_lines", "railway_nodes",
                                        "bridges"};

}  // namespace

InfraStore::InfraStore(double cell_deg) : index_(cell_deg) {}

void InfraStore::add_power(osm::PowerElements elements) {
  merge_by_id(towers_, std::move(elements.towers));
  merge_by_id(line_nodes_, std::move(elements.line_nodes));
  merge_by_id(power_lines_, std::move(elements.lines));
  // A node tagged as a tower in one extract wins over a plain line node.
  std::unordered_set<NodeId> tower_ids;
  for (const auto& t : towers_) tower_ids.insert(t.id);
  std::erase_if(line_nodes_, [&](const osm::OsmNode& n) { return tower_ids.contains(n.id); });
  std::unordered_set<NodeId> known = tower_ids;
  for (const auto& n : line_nodes_) known.insert(n.id);
  for (const auto& line : power_lines_) {
    for (auto r : line.node_refs) {
      if (!known.contains(r)) {
        throw Error(ErrorCode::kDanglingReference,
                    "power line " + std::to_string(line.id) + " references unknown node " + std::to_string(r));
      }
    }
  }
  reindex();
}

void InfraStore::add_railway_nodes(std::vector<osm::OsmNode> nodes) {
  merge_by_id(railway_nodes_, std::move(nodes));
}

void InfraStore::add_bridges(std::vector<osm::BridgePolygon> bridges) {
  merge_by_id(bridges_, std::move(bridges));
}

void InfraStore::reindex() {
  index_ = GridIndex(index_.cell_deg());
  tower_pos_.clear();
  for (std::size_t i = 0; i < towers_.size(); ++i) {
    tower_pos_.emplace(towers_[i].id, i);
    index_.insert(towers_[i].id, towers_[i].location);
  }
}

const osm::OsmNode* InfraStore::find_tower(NodeId id) const {
  auto it = tower_pos_.find(id);
  return it == tower_pos_.end() ? nullptr : &towers_[it->second];
}

std::vector<Neighbor> InfraStore::geo_near_ids(const GeoPoint& p, double radius_m) const {
  if (!(radius_m > 0.0)) throw Error(ErrorCode::kInvalidArgument, "geo_near radius must be positive");
  return index_.within(p, radius_m);
}

std::vector<osm::OsmNode> InfraStore::geo_near(const GeoPoint& p, double radius_m) const {
  std::vector<osm::OsmNode> out;
  for (const auto& hit : geo_near_ids(p, radius_m)) out.push_back(*find_tower(hit.id));
  return out;
}

std::vector<osm::OsmNode> InfraStore::towers_in(const BoundingBox& bbox) const {
  std::vector<osm::OsmNode> out;
  for (const auto& t : towers_) {
    if (bbox.contains(t.location)) out.push_back(t);
  }
  return out;
}

bool operator==(const InfraStore& a, const InfraStore& b) {
  return a.towers_ == b.towers_ && a.line_nodes_ == b.line_nodes_ &&
         a.power_lines_ == b.power_lines_ && a.railway_nodes_ == b.railway_nodes_ &&
         a.bridges_ == b.bridges_;
}

void persist(const InfraStore& store, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIoError, "cannot create store directory " + dir.string());
  }
  write_json(dir / "towers.json", store.towers());
  write_json(dir / "line_nodes.json", store.line_nodes());
  write_json(dir / "power_lines.json", store.power_lines());
  write_json(dir / "railway_nodes.json", store.railway_nodes());
  write_json(dir / "bridges.json", store.bridges());
  json manifest = {{"schema_version", kStoreSchemaVersion}, {"cell_deg", store.cell_deg()}};
  for (const char* name : kCollections) manifest["collections"][name] = std::string(name) + ".json";
  // Manifest last: a store directory without one is incomplete.
  write_json(dir / "manifest.json", manifest);
}

InfraStore load_store(const std::filesystem::path& dir) {
  const json manifest = read_json(dir / "manifest.json");
  if (!manifest.is_object() || !manifest.contains("schema_version") ||
      !manifest["schema_version"].is_number_integer() ||
      manifest["schema_version"].get<int>() != kStoreSchemaVersion) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "store " + dir.string() + " has unsupported schema_version");
  }
  const double cell = manifest.value("cell_deg", 0.01);
  try {
    InfraStore store(cell);
    osm::PowerElements power;
    power.towers = read_json(dir / "towers.json").get<std::vector<osm::OsmNode>>();
    power.line_nodes = read_json(dir / "line_nodes.json").get<std::vector<osm::OsmNode>>();
    power.lines = read_json(dir / "power_lines.json").get<std::vector<osm::PowerLine>>();
    store.add_power(std::move(power));
    store.add_railway_nodes(read_json(dir / "railway_nodes.json").get<std::vector<osm::OsmNode>>());
    store.add_bridges(read_json(dir / "bridges.json").get<std::vector<osm::BridgePolygon>>());
    return store;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIoError, "corrupted store " + dir.string() + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIoError) throw;
    throw Error(ErrorCode::kIoError, "corrupted store " + dir.string() + ": " + e.what());
  }
}

InfraStore ingest(const BoundingBox& bbox, const osm::ElementSource& source, const IngestOptions& options) {
  InfraStore store;
  auto power = osm::parse_elements(osm::fetch_power_infrastructure(bbox, source));
  spdlog::info("ingest: {} towers, {} line nodes, {} lines, {} discarded", power.towers.size(),
               power.line_nodes.size(), power.lines.size(), power.discarded.size());
  store.add_power(std::move(power));
  if (options.railways) {
    store.add_railway_nodes(osm::parse_railways(osm::fetch_railways(bbox, source)).nodes);
  }
  if (options.bridges) store.add_bridges(osm::fetch_bridges(bbox, source).polygons);
  return store;
}

}  // namespace gridplan
