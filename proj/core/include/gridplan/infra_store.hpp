#pragma once

#include <filesystem>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gridplan/geo.hpp"
#include "gridplan/osm.hpp"

namespace gridplan {

inline constexpr int kStoreSchemaVersion = 1;

/// Embedded document store for extracted infrastructure. Collections are
/// kept sorted by id; towers are indexed on a lat/lon grid for geo_near.
///
/// Ingestion goes through the add_* calls from a single writer. Once
/// ingestion is done the store is read-only and may be shared freely.
class InfraStore {
 public:
  explicit InfraStore(double cell_deg = 0.01);

  /// Adds parsed power elements. Throws kDanglingReference if a line refers
  /// to a node that is neither a tower nor a line node of this store.
  void add_power(osm::PowerElements elements);
  void add_railway_nodes(std::vector<osm::OsmNode> nodes);
  void add_bridges(std::vector<osm::BridgePolygon> bridges);

  const std::vector<osm::OsmNode>& towers() const noexcept { return towers_; }
  const std::vector<osm::OsmNode>& line_nodes() const noexcept { return line_nodes_; }
  const std::vector<osm::PowerLine>& power_lines() const noexcept { return power_lines_; }
  const std::vector<osm::OsmNode>& railway_nodes() const noexcept { return railway_nodes_; }
  const std::vector<osm::BridgePolygon>& bridges() const noexcept { return bridges_; }

  const osm::OsmNode* find_tower(NodeId id) const;
  bool is_tower(NodeId id) const { return tower_pos_.contains(id); }

  /// Towers within radius_m of p, sorted by (distance, id).
  std::vector<osm::OsmNode> geo_near(const GeoPoint& p, double radius_m) const;
  std::vector<Neighbor> geo_near_ids(const GeoPoint& p, double radius_m) const;

  /// Towers inside bbox, id order.
  std::vector<osm::OsmNode> towers_in(const BoundingBox& bbox) const;

  double cell_deg() const noexcept { return index_.cell_deg(); }

  /// Collection-wise equality (the index is derived data).
  friend bool operator==(const InfraStore& a, const InfraStore& b);

 private:
  void reindex();

  std::vector<osm::OsmNode> towers_;
  std::vector<osm::OsmNode> line_nodes_;
  std::vector<osm::PowerLine> power_lines_;
  std::vector<osm::OsmNode> railway_nodes_;
  std::vector<osm::BridgePolygon> bridges_;
  std::unordered_map<NodeId, std::size_t> tower_pos_;
  GridIndex index_;
};

/// Writes manifest.json plus one JSON document per collection into `dir`.
/// Throws kIoError when the directory or a file cannot be written.
void persist(const InfraStore& store, const std::filesystem::path& dir);

/// Reads a directory written by persist(). Throws kIoError for unreadable or
/// unparsable files, kSchemaVersionMismatch for an unknown schema_version.
InfraStore load_store(const std::filesystem::path& dir);

/// Fetches power (and optionally railway/bridge) data for bbox and ingests it.
struct IngestOptions {
  bool railways = false;
  bool bridges = false;
};
InfraStore ingest(const BoundingBox& bbox, const osm::ElementSource& source,
                  const IngestOptions& options = {});

}  // namespace gridplan
