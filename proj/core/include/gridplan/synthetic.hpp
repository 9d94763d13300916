#pragma once

#include <cstdint>

#include <nlohmann/json.hpp>

#include "gridplan/geo.hpp"

namespace gridplan {

struct SyntheticGridOptions {
  std::size_t towers = 5000;
  std::uint64_t seed = 1;
  // Defaults cover Denmark.
  double south = 54.8, west = 8.2, north = 57.6, east = 12.6;
  std::size_t substations = 40;
  double span_m = 320.0;               // mean tower spacing along a line
  std::size_t junction_every = 37;     // every n-th interior ref is a plain (non-tower) node
};

/// Generates an Overpass-style `elements` array describing a power grid:
/// substations joined by a spanning tree of lines plus a few cross links,
/// towers spaced ~span_m apart with lateral jitter. Exactly `towers` nodes
/// carry power=tower. Deterministic for a given options value.
nlohmann::json synthesize_power_elements(const SyntheticGridOptions& options);

}  // namespace gridplan
