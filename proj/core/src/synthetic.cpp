#include "gridplan/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gridplan/error.hpp"

namespace gridplan {

using nlohmann::json;

namespace {

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double in(double lo, double hi) { return lo + (hi - lo) * next(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

json synthesize_power_elements(const SyntheticGridOptions& o) {
  if (o.towers < 2) throw Error(ErrorCode::kInvalidArgument, "synthetic grid needs at least two towers");
  BoundingBox region(o.south, o.west, o.north, o.east);
  Uniform rnd(o.seed);

  const std::size_t subs = std::clamp<std::size_t>(o.substations, 2, std::max<std::size_t>(2, o.towers / 10));
  std::vector<GeoPoint> stations;
  for (std::size_t i = 0; i < subs; ++i) {
    stations.emplace_back(rnd.in(region.south(), region.north()), rnd.in(region.west(), region.east()));
  }

  // Spanning tree by attaching each station to its nearest predecessor,
  // then a few extra links between near neighbours.
  std::vector<std::pair<std::size_t, std::size_t>> links;
  for (std::size_t i = 1; i < subs; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < i; ++j) {
      if (haversine_distance(stations[i], stations[j]) < haversine_distance(stations[i], stations[best])) best = j;
    }
    links.emplace_back(best, i);
  }
  for (std::size_t extra = 0; extra < subs / 4; ++extra) {
    const auto a = rnd.index(subs);
    std::size_t best = a;
    double best_d = 0.0;
    for (std::size_t j = 0; j < subs; ++j) {
      if (j == a) continue;
      const bool linked = std::any_of(links.begin(), links.end(), [&](auto l) {
        return (l.first == a && l.second == j) || (l.first == j && l.second == a);
      });
      const double d = haversine_distance(stations[a], stations[j]);
      if (!linked && (best == a || d < best_d)) {
        best = j;
        best_d = d;
      }
    }
    if (best != a) links.emplace_back(std::min(a, best), std::max(a, best));
  }

  // Interior towers per link, proportional to length, summing to the budget.
  const std::size_t budget = o.towers - subs;
  std::vector<double> want(links.size());
  double total = 0.0;
  for (std::size_t k = 0; k < links.size(); ++k) {
    want[k] = std::max(0.0, haversine_distance(stations[links[k].first], stations[links[k].second]) / o.span_m - 1.0);
    total += want[k];
  }
  std::vector<std::size_t> interior(links.size(), 0);
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < links.size(); ++k) {
    interior[k] = total > 0 ? static_cast<std::size_t>(std::floor(want[k] / total * static_cast<double>(budget))) : 0;
    assigned += interior[k];
  }
  for (std::size_t k = 0; assigned < budget; k = (k + 1) % links.size(), ++assigned) ++interior[k];

  json nodes = json::array();
  json ways = json::array();
  std::int64_t next_node = 100001;
  const std::int64_t station_base = next_node;
  for (const auto& s : stations) {
    nodes.push_back({{"type", "node"}, {"id", next_node++}, {"lat", s.lat()}, {"lon", s.lon()},
                     {"tags", {{"power", "tower"}, {"structure", "substation_portal"}}}});
  }
  static constexpr const char* kVoltages[] = {"132000", "150000", "400000"};
  std::int64_t next_way = 5000001;
  for (std::size_t k = 0; k < links.size(); ++k) {
    const auto& a = stations[links[k].first];
    const auto& b = stations[links[k].second];
    const auto n = interior[k];
    // Lateral jitter perpendicular-ish to the line, in degrees.
    const double jitter_deg = 0.15 * o.span_m / kEarthRadiusM * 180.0 / std::numbers::pi;
    std::vector<std::int64_t> refs{station_base + static_cast<std::int64_t>(links[k].first)};
    for (std::size_t i = 1; i <= n; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(n + 1);
      const double lat = a.lat() + t * (b.lat() - a.lat()) + rnd.in(-jitter_deg, jitter_deg);
      const double lon = a.lon() + t * (b.lon() - a.lon()) + rnd.in(-jitter_deg, jitter_deg);
      if (o.junction_every > 0 && i % o.junction_every == 0) {
        // Plain node just before the tower, e.g. a tap point on the line.
        const double jl = lat - 0.2 * (b.lat() - a.lat()) / static_cast<double>(n + 1);
        const double jo = lon - 0.2 * (b.lon() - a.lon()) / static_cast<double>(n + 1);
        nodes.push_back({{"type", "node"}, {"id", next_node}, {"lat", jl}, {"lon", jo}});
        refs.push_back(next_node++);
      }
      nodes.push_back({{"type", "node"}, {"id", next_node}, {"lat", lat}, {"lon", lon},
                       {"tags", {{"power", "tower"}}}});
      refs.push_back(next_node++);
    }
    refs.push_back(station_base + static_cast<std::int64_t>(links[k].second));
    ways.push_back({{"type", "way"},
                    {"id", next_way++},
                    {"nodes", refs},
                    {"tags",
                     {{"power", "line"}, {"voltage", kVoltages[rnd.index(3)]}, {"cables", "3"}, {"frequency", "50"}}}});
  }
  for (auto& w : ways) nodes.push_back(std::move(w));
  return nodes;
}

}  // namespace gridplan
