#pragma once

#include <cstdint>
#include <vector>

namespace gridplan {

/// Square integer-metre cost matrix over entities ordered sources first,
/// then targets. Entries equal to kInfinity mean "no path".
struct CostMatrix {
  static constexpr std::int64_t kInfinity = std::int64_t{1} << 62;

  CostMatrix() = default;
  CostMatrix(std::size_t sources, std::size_t targets);

  std::size_t sources = 0;
  std::size_t targets = 0;
  std::vector<std::int64_t> cost;

  std::size_t size() const noexcept { return sources + targets; }
  std::int64_t at(std::size_t i, std::size_t j) const { return cost[i * size() + j]; }
  std::int64_t& at(std::size_t i, std::size_t j) { return cost[i * size() + j]; }
  std::size_t target_entity(std::size_t k) const noexcept { return sources + k; }

  friend bool operator==(const CostMatrix&, const CostMatrix&) = default;
};

struct VrpOptions {
  bool return_to_start = false;  // closed tours when true
  std::size_t max_moves = 10'000;
};

struct VrpSolution {
  std::vector<std::vector<std::size_t>> routes;  // per vehicle, target indices in visit order
  std::int64_t construction_cost = 0;
  std::int64_t total_cost = 0;
  std::size_t moves = 0;  // improving local-search moves applied
};

/// Multi-vehicle routing over `m`, vehicle v starting at entity v.
///
/// Greedy cheapest insertion over all vehicles, then first-improvement
/// local search (intra-route 2-opt, inter-route relocate, inter-route swap,
/// scanned in that order and restarted after every applied move) until no
/// move improves or max_moves is reached. `seed` orders equal-cost insertion
/// candidates; the result is a pure function of (m, num_vehicles, seed).
///
/// Throws kInfeasible when a target is unreachable from every vehicle.
VrpSolution solve_vrp(const CostMatrix& m, std::size_t num_vehicles, std::uint64_t seed,
                      const VrpOptions& options = {});

/// Cost of one vehicle's route; kInfinity when it uses a missing arc.
std::int64_t route_cost(const CostMatrix& m, std::size_t vehicle, const std::vector<std::size_t>& route,
                        bool return_to_start = false);

}  // namespace gridplan
