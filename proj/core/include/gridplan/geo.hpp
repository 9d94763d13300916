#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace gridplan {

// OSM node ids are positive; synthetic nodes (bridge centroids) are negative.
using NodeId = std::int64_t;

inline constexpr double kEarthRadiusM = 6'371'000.0;

/// WGS84 position in decimal degrees. Construction rejects out-of-range
/// coordinates with ErrorCode::kInvalidArgument.
class GeoPoint {
 public:
  constexpr GeoPoint() = default;
  GeoPoint(double lat, double lon);

  double lat() const noexcept { return lat_; }
  double lon() const noexcept { return lon_; }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

 private:
  double lat_ = 0.0;
  double lon_ = 0.0;
};

/// Axis-aligned lat/lon box. Boxes crossing the antimeridian are rejected.
class BoundingBox {
 public:
  BoundingBox(double south, double west, double north, double east);

  /// Parses "S,W,N,E".
  static BoundingBox parse(const std::string& text);

  double south() const noexcept { return south_; }
  double west() const noexcept { return west_; }
  double north() const noexcept { return north_; }
  double east() const noexcept { return east_; }

  bool contains(const GeoPoint& p) const noexcept;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  double south_, west_, north_, east_;
};

/// Great-circle distance on a sphere of radius kEarthRadiusM.
double haversine_distance(const GeoPoint& a, const GeoPoint& b) noexcept;

struct Neighbor {
  NodeId id;
  double distance_m;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Uniform lat/lon bucket grid over node positions. Radius queries return
/// exactly the set a linear scan with haversine_distance would return.
class GridIndex {
 public:
  explicit GridIndex(double cell_deg = 0.01);

  void insert(NodeId id, const GeoPoint& p);

  /// All entries with haversine distance <= radius_m, sorted by (distance, id).
  std::vector<Neighbor> within(const GeoPoint& center, double radius_m) const;

  /// Closest entry within max_radius_m; ties broken by smallest id.
  std::optional<Neighbor> nearest(const GeoPoint& p, double max_radius_m) const;

  std::size_t size() const noexcept { return size_; }
  double cell_deg() const noexcept { return cell_deg_; }

 private:
  struct Entry {
    NodeId id;
    GeoPoint point;
  };

  std::int64_t row_of(double lat) const noexcept;
  std::int64_t col_of(double lon) const noexcept;
  static std::uint64_t key(std::int64_t row, std::int64_t col) noexcept;

  double cell_deg_;
  std::size_t size_ = 0;
  std::unordered_map<std::uint64_t, std::vector<Entry>> cells_;
};

}  // namespace gridplan
