#include <gtest/gtest.h>

#include "gridplan/codec.hpp"
#include "gridplan/error.hpp"

using namespace gridplan;
using nlohmann::json;

TEST(Codec, EndpointForms) {
  EXPECT_EQ(endpoint_to_json(NodeId{5}), json::parse(R"({"node":5})"));
  EXPECT_EQ(endpoint_to_json(GeoPoint(55.4, 10.3)), json::parse(R"({"point":{"lat":55.4,"lon":10.3}})"));
  EXPECT_EQ(std::get<NodeId>(endpoint_from_json(json::parse(R"({"node":7})"))), 7);
  EXPECT_THROW(endpoint_from_json(json::parse(R"({"node":7,"point":{"lat":1,"lon":2}})")), Error);
  EXPECT_THROW(endpoint_from_json(json::parse("{}")), Error);
  EXPECT_THROW(endpoint_from_json(json::parse(R"({"point":{"lat":95,"lon":2}})")), Error);
}

TEST(Codec, PathRequestRoundTrip) {
  const PathRequest r{NodeId{3}, GeoPoint(55.1, 10.2)};
  const auto back = path_request_from_json(path_request_to_json(r));
  EXPECT_EQ(std::get<NodeId>(back.source), 3);
  EXPECT_EQ(std::get<GeoPoint>(back.target), GeoPoint(55.1, 10.2));
}

TEST(Codec, PathResultRoundTripAndValidation) {
  const PathResult p{{1, 2}, {GeoPoint(55.4, 10.3), GeoPoint(55.4, 10.305)}, {316.5}, 316.5};
  EXPECT_EQ(json(p).get<PathResult>(), p);
  auto broken = json(p);
  broken["segment_costs_m"] = json::array();
  EXPECT_THROW(broken.get<PathResult>(), Error);
}

TEST(Codec, MissionRequestSeedDefaults) {
  const auto r = json::parse(R"({"uavs":[{"lat":55.4,"lon":10.3}],"targets":[1,2]})").get<MissionRequest>();
  EXPECT_EQ(r.seed, 0u);
  EXPECT_EQ(r.targets, (std::vector<NodeId>{1, 2}));
  const MissionRequest full{{GeoPoint(55.4, 10.3)}, {9}, 12};
  EXPECT_EQ(json(full).get<MissionRequest>(), full);
}

TEST(Codec, PlanBytesAreCanonical) {
  MissionPlan plan;
  plan.routes.push_back({0, {4, 2}, {GeoPoint(55.4, 10.3), GeoPoint(55.4, 10.31)}, 632});
  plan.total_distance_m = 632;
  const auto s = plan_to_string(plan);
  EXPECT_EQ(s, plan_to_string(json::parse(s).get<MissionPlan>()));
  EXPECT_EQ(json::parse(s).get<MissionPlan>(), plan);
}
