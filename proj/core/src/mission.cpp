#include "gridplan/mission.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

#include "gridplan/error.hpp"

namespace gridplan {

void MissionRequest::validate() const {
  if (uavs.empty() || uavs.size() > kMaxUavs) {
    throw Error(ErrorCode::kInvalidArgument, "mission needs between 1 and 64 UAVs");
  }
  if (targets.empty() || targets.size() > kMaxTargets) {
    throw Error(ErrorCode::kInvalidArgument, "mission needs between 1 and 1024 targets");
  }
  std::set<NodeId> seen;
  for (auto t : targets) {
    if (!seen.insert(t).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate target " + std::to_string(t));
    }
  }
}

PathOutcome LocalPathClient::shortest_path(const PathRequest& request) {
  const auto g = service_.graph();
  PathOutcome out;
  out.source_node = service_.resolve(*g, request.source);
  out.target_node = service_.resolve(*g, request.target);
  out.source_point = g->graph.location(out.source_node);
  out.target_point = g->graph.location(out.target_node);
  try {
    out.path = astar_shortest_path(g->search, out.source_node, out.target_node);
  } catch (const UnreachablePathError&) {
    out.path.reset();
  }
  return out;
}

DistanceMatrix assemble_distance_matrix(const MissionRequest& request, PathClient& client,
                                        const AssemblyOptions& options) {
  request.validate();
  if (options.max_in_flight == 0) throw Error(ErrorCode::kInvalidArgument, "max_in_flight must be >= 1");

  const auto S = request.uavs.size();
  const auto T = request.targets.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(S * T + T * (T - 1) / 2);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t k = 0; k < T; ++k) pairs.emplace_back(s, S + k);
  }
  for (std::size_t a = 0; a < T; ++a) {
    for (std::size_t b = a + 1; b < T; ++b) pairs.emplace_back(S + a, S + b);
  }

  auto request_for = [&](std::size_t from, std::size_t to) {
    PathRequest r;
    r.source = from < S ? PathEndpoint{request.uavs[from]} : PathEndpoint{request.targets[from - S]};
    r.target = PathEndpoint{request.targets[to - S]};
    return r;
  };

  std::vector<PathOutcome> outcomes(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i; !failed.load(std::memory_order_relaxed) && (i = next.fetch_add(1)) < pairs.size();) {
      try {
        outcomes[i] = client.shortest_path(request_for(pairs[i].first, pairs[i].second));
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  const auto workers = std::min(options.max_in_flight, pairs.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  DistanceMatrix m;
  m.cost = CostMatrix(S, T);
  m.source_nodes.resize(S);
  m.source_points.resize(S);
  m.target_nodes = request.targets;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [from, to] = pairs[i];
    auto& o = outcomes[i];
    if (from < S && to == S) {
      m.source_nodes[from] = o.source_node;
      m.source_points[from] = o.source_point;
    }
    if (!o.path) continue;
    const auto c = static_cast<std::int64_t>(std::llround(o.path->total_cost_m));
    m.cost.at(from, to) = c;
    m.cost.at(to, from) = c;
    m.path_cache.emplace(std::pair{to, from}, o.path->reversed());
    m.path_cache.emplace(std::pair{from, to}, std::move(*o.path));
  }

  std::vector<std::int64_t> unreachable;
  for (std::size_t k = 0; k < T; ++k) {
    bool any = false;
    for (std::size_t s = 0; s < S && !any; ++s) any = m.cost.at(s, S + k) < CostMatrix::kInfinity;
    if (!any) unreachable.push_back(request.targets[k]);
  }
  if (!unreachable.empty()) throw UnreachableTargetsError(std::move(unreachable));
  return m;
}

MissionPlan stitch_plan(const DistanceMatrix& matrix, const VrpSolution& solution, bool return_to_start) {
  MissionPlan plan;
  const auto S = matrix.cost.sources;
  for (std::size_t v = 0; v < solution.routes.size(); ++v) {
    const auto& order = solution.routes[v];
    MissionRoute route;
    route.uav_index = v;
    route.waypoints.push_back(matrix.source_points.at(v));
    std::size_t at = v;
    auto walk = [&](std::size_t to) {
      const auto& leg = matrix.path(at, to);
      route.waypoints.insert(route.waypoints.end(), leg.points.begin() + 1, leg.points.end());
      at = to;
    };
    for (auto k : order) {
      route.visit_order.push_back(matrix.target_nodes.at(k));
      walk(S + k);
    }
    if (return_to_start && !order.empty()) walk(v);
    route.distance_m = route_cost(matrix.cost, v, order, return_to_start);
    plan.total_distance_m += route.distance_m;
    plan.routes.push_back(std::move(route));
  }
  return plan;
}

MissionPlan plan_mission(const MissionRequest& request, PathClient& client, const PlanOptions& options) {
  const auto matrix = assemble_distance_matrix(request, client, options.assembly);
  const auto solution = solve_vrp(matrix.cost, request.uavs.size(), request.seed, options.vrp);
  return stitch_plan(matrix, solution, options.vrp.return_to_start);
}

}  // namespace gridplan
