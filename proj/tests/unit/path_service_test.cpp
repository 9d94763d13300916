#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <thread>

#include "gridplan/error.hpp"
#include "gridplan/path_service.hpp"
#include "process.hpp"

using namespace gridplan;

namespace {

std::string line_graph() {
  InfrastructureGraph g;
  g.add_node(1, {55.400, 10.300});
  g.add_node(2, {55.400, 10.305});
  g.add_node(3, {55.400, 10.310});
  g.add_edge(1, 2, 316, EdgeKind::kDirect);
  g.add_edge(2, 3, 316, EdgeKind::kDirect);
  return serialize_graph(g);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no gridplan::Error thrown";
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST(PathService, NodeAndPointEndpoints) {
  PathService svc([] { return line_graph(); });
  EXPECT_FALSE(svc.ready());
  const auto p = svc.handle({NodeId{1}, NodeId{3}});
  EXPECT_EQ(p.node_ids, (std::vector<NodeId>{1, 2, 3}));
  EXPECT_TRUE(svc.ready());
  const auto q = svc.handle({GeoPoint(55.4001, 10.3001), GeoPoint(55.4001, 10.3049)});
  EXPECT_EQ(q.node_ids, (std::vector<NodeId>{1, 2}));
  EXPECT_EQ(code_of([&] { svc.handle({NodeId{1}, NodeId{77}}); }), ErrorCode::kUnknownNode);
  EXPECT_EQ(code_of([&] { svc.handle({GeoPoint(56.5, 11.0), NodeId{1}}); }), ErrorCode::kNoNodeInRange);
}

TEST(PathService, ConcurrentFirstCallersShareOneFetch) {
  std::atomic<int> fetches{0};
  PathService svc([&] {
    ++fetches;
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    return line_graph();
  });
  {
    std::vector<std::jthread> threads;
    for (int i = 0; i < 12; ++i) threads.emplace_back([&] { svc.handle({NodeId{1}, NodeId{3}}); });
  }
  EXPECT_EQ(fetches.load(), 1);
  EXPECT_EQ(svc.fetch_attempts(), 1u);
}

TEST(PathService, RetriesOnceThenFails) {
  int calls = 0;
  PathService flaky([&]() -> std::string {
    if (++calls == 1) throw std::runtime_error("transient");
    return line_graph();
  });
  EXPECT_NO_THROW(flaky.handle({NodeId{1}, NodeId{2}}));
  EXPECT_EQ(calls, 2);

  int down_calls = 0;
  PathService down([&]() -> std::string {
    ++down_calls;
    throw std::runtime_error("down");
  });
  EXPECT_EQ(code_of([&] { down.handle({NodeId{1}, NodeId{2}}); }), ErrorCode::kGraphUnavailable);
  EXPECT_EQ(down_calls, 2);
  EXPECT_EQ(code_of([&] { down.handle({NodeId{1}, NodeId{2}}); }), ErrorCode::kGraphUnavailable);
  EXPECT_EQ(down_calls, 4);
}

TEST(PathService, RecoversAfterGraphServiceReturns) {
  bool up = false;
  PathService svc([&]() -> std::string {
    if (!up) throw std::runtime_error("connection refused");
    return line_graph();
  });
  EXPECT_EQ(code_of([&] { svc.handle({NodeId{1}, NodeId{3}}); }), ErrorCode::kGraphUnavailable);
  up = true;
  EXPECT_EQ(svc.handle({NodeId{1}, NodeId{3}}).node_ids.size(), 3u);
}

TEST(PathService, CorruptGraphIsUnavailable) {
  PathService svc([] { return std::string("{oops"); });
  EXPECT_EQ(code_of([&] { svc.graph(); }), ErrorCode::kGraphUnavailable);
}

TEST(PathService, InvalidateRefetches) {
  int calls = 0;
  PathService svc([&] {
    ++calls;
    return line_graph();
  });
  svc.graph();
  svc.graph();
  svc.invalidate();
  EXPECT_FALSE(svc.ready());
  svc.graph();
  EXPECT_EQ(calls, 2);
}

TEST(PathService, FileFetcher) {
  PathService missing(graph_file_fetcher("/nonexistent/graph.json"));
  EXPECT_EQ(code_of([&] { missing.graph(); }), ErrorCode::kGraphUnavailable);
  EXPECT_EQ(code_of([] { PathService([] { return std::string(); }, 0.0); }), ErrorCode::kConfigError);
}
