#include "gridplan/geo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "gridplan/error.hpp"

namespace gridplan {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

bool finite_in(double v, double lo, double hi) {
  return std::isfinite(v) && v >= lo && v <= hi;
}

}  // namespace

GeoPoint::GeoPoint(double lat, double lon) : lat_(lat), lon_(lon) {
  if (!finite_in(lat, -90.0, 90.0) || !finite_in(lon, -180.0, 180.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "coordinate out of range: lat=" + std::to_string(lat) +
                    " lon=" + std::to_string(lon));
  }
}

BoundingBox::BoundingBox(double south, double west, double north, double east)
    : south_(south), west_(west), north_(north), east_(east) {
  if (!finite_in(south, -90.0, 90.0) || !finite_in(north, -90.0, 90.0) ||
      !finite_in(west, -180.0, 180.0) || !finite_in(east, -180.0, 180.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bounding box coordinate out of range");
  }
  if (south > north) {
    throw Error(ErrorCode::kInvalidArgument, "bounding box south > north");
  }
  if (west > east) {
    throw Error(ErrorCode::kInvalidArgument,
                "bounding box west > east (antimeridian boxes are unsupported)");
  }
}

BoundingBox BoundingBox::parse(const std::string& text) {
  double v[4];
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    auto end = text.find(',', pos);
    if ((i < 3) == (end == std::string::npos)) {
      throw Error(ErrorCode::kInvalidArgument, "bbox must be S,W,N,E: " + text);
    }
    const std::string part = text.substr(pos, end == std::string::npos ? end : end - pos);
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v[i]);
    if (ec != std::errc{} || ptr != part.data() + part.size()) {
      throw Error(ErrorCode::kInvalidArgument, "bbox component not a number: " + part);
    }
    pos = end + 1;
  }
  return BoundingBox(v[0], v[1], v[2], v[3]);
}

bool BoundingBox::contains(const GeoPoint& p) const noexcept {
  return p.lat() >= south_ && p.lat() <= north_ && p.lon() >= west_ && p.lon() <= east_;
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b) noexcept {
  const double phi1 = a.lat() * kDegToRad;
  const double phi2 = b.lat() * kDegToRad;
  const double dphi = (b.lat() - a.lat()) * kDegToRad;
  const double dlambda = (b.lon() - a.lon()) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = std::min(1.0, s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

GridIndex::GridIndex(double cell_deg) : cell_deg_(cell_deg) {
  if (!(cell_deg > 0.0) || !std::isfinite(cell_deg)) {
    throw Error(ErrorCode::kInvalidArgument, "grid cell size must be positive");
  }
}

std::int64_t GridIndex::row_of(double lat) const noexcept {
  return static_cast<std::int64_t>(std::floor(lat / cell_deg_));
}

std::int64_t GridIndex::col_of(double lon) const noexcept {
  return static_cast<std::int64_t>(std::floor(lon / cell_deg_));
}

std::uint64_t GridIndex::key(std::int64_t row, std::int64_t col) noexcept {
  return (static_cast<std::uint64_t>(row) << 32) ^ (static_cast<std::uint64_t>(col) & 0xffffffffULL);
}

void GridIndex::insert(NodeId id, const GeoPoint& p) {
  cells_[key(row_of(p.lat()), col_of(p.lon()))].push_back(Entry{id, p});
  ++size_;
}

std::vector<Neighbor> GridIndex::within(const GeoPoint& center, double radius_m) const {
  std::vector<Neighbor> out;
  if (!(radius_m >= 0.0)) return out;

  auto consider = [&](const std::vector<Entry>& bucket) {
    for (const auto& e : bucket) {
      const double d = haversine_distance(center, e.point);
      if (d <= radius_m) out.push_back(Neighbor{e.id, d});
    }
  };

  // Conservative angular window around the center. The longitude half-width
  // is the exact spherical maximum asin(sin(d) / cos(lat)), padded by a cell.
  const double delta = radius_m / kEarthRadiusM;
  bool scan_all = delta >= std::numbers::pi / 2.0;
  double lat_lo = 0, lat_hi = 0, lon_lo = 0, lon_hi = 0;
  if (!scan_all) {
    const double dlat = delta * kRadToDeg * (1.0 + 1e-9) + 1e-12;
    lat_lo = center.lat() - dlat;
    lat_hi = center.lat() + dlat;
    const double cos_lat = std::cos(center.lat() * kDegToRad);
    const double ratio = std::sin(delta) / cos_lat;
    if (lat_lo <= -90.0 || lat_hi >= 90.0 || !(ratio < 1.0)) {
      scan_all = true;
    } else {
      const double dlon = std::asin(ratio) * kRadToDeg * (1.0 + 1e-9) + 1e-12;
      lon_lo = center.lon() - dlon;
      lon_hi = center.lon() + dlon;
      if (lon_lo < -180.0 || lon_hi > 180.0) scan_all = true;
    }
  }

  if (scan_all) {
    for (const auto& [k, bucket] : cells_) consider(bucket);
  } else {
    const auto r0 = row_of(lat_lo) - 1, r1 = row_of(lat_hi) + 1;
    const auto c0 = col_of(lon_lo) - 1, c1 = col_of(lon_hi) + 1;
    const auto window = static_cast<double>(r1 - r0 + 1) * static_cast<double>(c1 - c0 + 1);
    if (window > static_cast<double>(cells_.size())) {
      for (const auto& [k, bucket] : cells_) {
        const auto& probe = bucket.front().point;
        const auto r = row_of(probe.lat()), c = col_of(probe.lon());
        if (r >= r0 && r <= r1 && c >= c0 && c <= c1) consider(bucket);
      }
    } else {
      for (auto r = r0; r <= r1; ++r) {
        for (auto c = c0; c <= c1; ++c) {
          if (auto it = cells_.find(key(r, c)); it != cells_.end()) consider(it->second);
        }
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.distance_m != b.distance_m ? a.distance_m < b.distance_m : a.id < b.id;
  });
  return out;
}

std::optional<Neighbor> GridIndex::nearest(const GeoPoint& p, double max_radius_m) const {
  auto hits = within(p, max_radius_m);
  if (hits.empty()) return std::nullopt;
  return hits.front();
}

}  // namespace gridplan
