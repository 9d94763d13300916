#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gridplan/astar.hpp"
#include "gridplan/path_service.hpp"
#include "gridplan/vrp.hpp"

namespace gridplan {

inline constexpr std::size_t kMaxUavs = 64;
inline constexpr std::size_t kMaxTargets = 1024;

struct MissionRequest {
  std::vector<GeoPoint> uavs;
  std::vector<NodeId> targets;
  std::uint64_t seed = 0;

  /// Throws kInvalidArgument on empty/oversized lists or duplicate targets.
  void validate() const;

  friend bool operator==(const MissionRequest&, const MissionRequest&) = default;
};

/// Outcome of one shortest-path query. `path` is empty when the snapped
/// endpoints lie in different graph components.
struct PathOutcome {
  NodeId source_node = 0;
  GeoPoint source_point;
  NodeId target_node = 0;
  GeoPoint target_point;
  std::optional<PathResult> path;
};

/// Shortest-path provider used by the solver. Implementations must be safe
/// to call from several threads at once. Transport failures surface as
/// kPathServiceUnavailable after the implementation's single retry; errors
/// about the request itself (kUnknownNode, kNoNodeInRange) propagate as is.
class PathClient {
 public:
  virtual ~PathClient() = default;
  virtual PathOutcome shortest_path(const PathRequest& request) = 0;
};

/// In-process client over a PathService.
class LocalPathClient final : public PathClient {
 public:
  explicit LocalPathClient(PathService& service) : service_(service) {}
  PathOutcome shortest_path(const PathRequest& request) override;

 private:
  PathService& service_;
};

/// Pairwise costs over entities [uav_0..uav_{S-1}, target_0..target_{T-1}].
struct DistanceMatrix {
  CostMatrix cost;
  std::vector<NodeId> source_nodes;  // snapped start node per UAV
  std::vector<GeoPoint> source_points;
  std::vector<NodeId> target_nodes;
  std::map<std::pair<std::size_t, std::size_t>, PathResult> path_cache;  // both directions

  const PathResult& path(std::size_t from, std::size_t to) const { return path_cache.at({from, to}); }
};

struct AssemblyOptions {
  std::size_t max_in_flight = 32;  // 1 = strictly sequential on the calling thread
};

/// Queries every source->target pair and every unordered target pair once.
/// At most max_in_flight queries are outstanding; the result does not depend
/// on completion order. Throws UnreachableTargetsError when a target has no
/// finite cost from any source.
DistanceMatrix assemble_distance_matrix(const MissionRequest& request, PathClient& client,
                                        const AssemblyOptions& options = {});

struct MissionRoute {
  std::size_t uav_index = 0;
  std::vector<NodeId> visit_order;
  std::vector<GeoPoint> waypoints;
  std::int64_t distance_m = 0;

  friend bool operator==(const MissionRoute&, const MissionRoute&) = default;
};

struct MissionPlan {
  std::vector<MissionRoute> routes;
  std::int64_t total_distance_m = 0;

  friend bool operator==(const MissionPlan&, const MissionPlan&) = default;
};

struct PlanOptions {
  AssemblyOptions assembly;
  VrpOptions vrp;
};

/// Turns a solved assignment into per-UAV waypoint routes stitched from the
/// cached paths, with junction nodes shared by consecutive legs kept once.
MissionPlan stitch_plan(const DistanceMatrix& matrix, const VrpSolution& solution, bool return_to_start = false);

MissionPlan plan_mission(const MissionRequest& request, PathClient& client, const PlanOptions& options = {});

}  // namespace gridplan
