#include <gtest/gtest.h>

#include <random>

#include "gridplan/astar.hpp"
#include "gridplan/error.hpp"
#include "oracles.hpp"

using namespace gridplan;

namespace {

// Square 1-2-4 / 1-3-4 with both routes the same length.
InfrastructureGraph diamond() {
  InfrastructureGraph g;
  g.add_node(1, {55.400, 10.300});
  g.add_node(2, {55.401, 10.301});
  g.add_node(3, {55.399, 10.301});
  g.add_node(4, {55.400, 10.302});
  g.add_edge(1, 2, 100, EdgeKind::kDirect);
  g.add_edge(2, 4, 100, EdgeKind::kDirect);
  g.add_edge(1, 3, 100, EdgeKind::kDirect);
  g.add_edge(3, 4, 100, EdgeKind::kDirect);
  return g;
}

}  // namespace

TEST(AStar, MatchesDijkstraOnRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int g = 0; g < 20; ++g) {
    const auto graph = gridplan::testing::random_connected_graph(rng, 60 + rng() % 60);
    const SearchGraph search(graph);
    std::vector<NodeId> ids;
    for (const auto& [id, _] : graph.nodes()) ids.push_back(id);
    for (int k = 0; k < 10; ++k) {
      const auto s = ids[rng() % ids.size()], t = ids[rng() % ids.size()];
      SearchStats stats;
      const auto path = astar_shortest_path(search, s, t, &stats);
      const auto ref = gridplan::testing::dijkstra(graph, s, t);
      ASSERT_TRUE(ref.cost);
      EXPECT_EQ(path.total_cost_m, *ref.cost);
      EXPECT_LE(stats.expanded, ref.expanded);
      EXPECT_EQ(path.node_ids.front(), s);
      EXPECT_EQ(path.node_ids.back(), t);
    }
  }
}

TEST(AStar, PathIsConsistent) {
  std::mt19937_64 rng(12);
  const auto graph = gridplan::testing::random_connected_graph(rng, 150);
  const auto s = graph.nodes().begin()->first, t = graph.nodes().rbegin()->first;
  const auto p = astar_shortest_path(graph, s, t);
  ASSERT_EQ(p.points.size(), p.node_ids.size());
  ASSERT_EQ(p.segment_costs_m.size() + 1, p.node_ids.size());
  double sum = 0;
  for (std::size_t i = 0; i + 1 < p.node_ids.size(); ++i) {
    EXPECT_EQ(p.points[i], graph.location(p.node_ids[i]));
    sum += p.segment_costs_m[i];
  }
  EXPECT_DOUBLE_EQ(sum, p.total_cost_m);
  const auto r = p.reversed();
  EXPECT_EQ(r.node_ids.front(), t);
  EXPECT_DOUBLE_EQ(r.total_cost_m, p.total_cost_m);
  EXPECT_EQ(r.reversed(), p);
}

TEST(AStar, EqualCostTieTakesSmallestIdSequence) {
  const auto g = diamond();
  EXPECT_EQ(astar_shortest_path(g, 1, 4).node_ids, (std::vector<NodeId>{1, 2, 4}));
  EXPECT_EQ(astar_shortest_path(g, 4, 1).node_ids, (std::vector<NodeId>{4, 2, 1}));
}

TEST(AStar, SourceEqualsTarget) {
  const auto p = astar_shortest_path(diamond(), 3, 3);
  EXPECT_EQ(p.node_ids, std::vector<NodeId>{3});
  EXPECT_EQ(p.total_cost_m, 0.0);
}

TEST(AStar, UnknownAndUnreachable) {
  auto g = diamond();
  g.add_node(9, {55.5, 10.5});
  try {
    astar_shortest_path(g, 1, 42);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownNode);
  }
  try {
    astar_shortest_path(g, 1, 9);
    FAIL();
  } catch (const UnreachablePathError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnreachable);
    EXPECT_EQ(e.source(), 1);
    EXPECT_EQ(e.target(), 9);
  }
}
