#include <benchmark/benchmark.h>

#include <random>

#include "gridplan/astar.hpp"
#include "gridplan/error.hpp"
#include "gridplan/graph.hpp"
#include "gridplan/synthetic.hpp"
#include "gridplan/vrp.hpp"

using namespace gridplan;

namespace {

const InfrastructureGraph& grid_graph() {
  static const InfrastructureGraph g = [] {
    InfraStore store;
    store.add_power(osm::parse_elements(synthesize_power_elements(SyntheticGridOptions{})));
    return build_graph(store);
  }();
  return g;
}

std::vector<NodeId> node_ids(const InfrastructureGraph& g) {
  std::vector<NodeId> ids;
  for (const auto& [id, _] : g.nodes()) ids.push_back(id);
  return ids;
}

void BM_AStarRandomPairs(benchmark::State& state) {
  const auto& g = grid_graph();
  const SearchGraph search(g);
  const auto ids = node_ids(g);
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(astar_shortest_path(search, ids[rng() % ids.size()], ids[rng() % ids.size()]));
    } catch (const UnreachablePathError&) {
    }
  }
}
BENCHMARK(BM_AStarRandomPairs)->Unit(benchmark::kMillisecond);

void BM_SolveVrp(benchmark::State& state) {
  const auto V = static_cast<std::size_t>(state.range(0));
  const auto T = static_cast<std::size_t>(state.range(1));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> lat(55.3, 55.6), lon(10.2, 10.6);
  std::vector<GeoPoint> pts;
  for (std::size_t i = 0; i < V + T; ++i) pts.emplace_back(lat(rng), lon(rng));
  CostMatrix m(V, T);
  for (std::size_t a = 0; a < V + T; ++a) {
    for (std::size_t b = std::max(a + 1, V); b < V + T; ++b) {
      m.at(a, b) = m.at(b, a) = std::llround(haversine_distance(pts[a], pts[b]));
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(solve_vrp(m, V, 0));
}
BENCHMARK(BM_SolveVrp)->Args({1, 8})->Args({4, 16})->Args({16, 64})->Unit(benchmark::kMillisecond);

void BM_GridIndexWithin(benchmark::State& state) {
  const auto& g = grid_graph();
  GridIndex index;
  for (const auto& [id, p] : g.nodes()) index.insert(id, p);
  const auto ids = node_ids(g);
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.within(g.location(ids[rng() % ids.size()]), static_cast<double>(state.range(0))));
  }
}
BENCHMARK(BM_GridIndexWithin)->Arg(500)->Arg(5000);

void BM_BuildGraph(benchmark::State& state) {
  SyntheticGridOptions o;
  o.towers = static_cast<std::size_t>(state.range(0));
  InfraStore store;
  store.add_power(osm::parse_elements(synthesize_power_elements(o)));
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(store));
}
BENCHMARK(BM_BuildGraph)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
