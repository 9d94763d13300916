#include "gridplan/net/client.hpp"

#include <httplib.h>

#include "gridplan/codec.hpp"
#include "gridplan/error.hpp"

namespace gridplan::net {

using nlohmann::json;

namespace {

// A fresh connection per call: httplib servers park a worker thread on every
// idle keep-alive connection, which starves replicas under fan-out.
httplib::Client connect(const Url& url, std::chrono::seconds timeout) {
  httplib::Client cli(url.origin);
  cli.set_connection_timeout(std::chrono::seconds(5));
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  cli.set_keep_alive(false);
  return cli;
}

HttpResponse to_response(const httplib::Result& res, const Url& url, const std::string& route,
                         std::size_t replica) {
  if (!res) {
    throw Error(ErrorCode::kTransportError,
                url.origin + url.join(route) + ": " + httplib::to_string(res.error()));
  }
  return HttpResponse{res->status, res->body, replica};
}

}  // namespace

RoundRobinClient::RoundRobinClient(std::vector<std::string> urls, std::chrono::seconds timeout)
    : timeout_(timeout) {
  if (urls.empty()) throw Error(ErrorCode::kConfigError, "round-robin client needs at least one URL");
  for (const auto& u : urls) replicas_.push_back(Url::parse(u));
}

template <typename Call>
HttpResponse RoundRobinClient::dispatch(const std::string& route, Call&& call) {
  const auto first = cursor_.fetch_add(1, std::memory_order_relaxed) % replicas_.size();
  std::string last_error;
  for (std::size_t attempt = 0; attempt < 2; ++attempt) {
    const auto i = (first + attempt) % replicas_.size();
    const auto& url = replicas_[i];
    try {
      auto cli = connect(url, timeout_);
      auto resp = to_response(call(cli, url.join(route)), url, route, i);
      if (resp.status < 500) return resp;
      last_error = url.origin + " answered " + std::to_string(resp.status);
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  throw Error(ErrorCode::kAllReplicasFailed, "all replicas failed: " + last_error);
}

HttpResponse RoundRobinClient::get(const std::string& route) {
  return dispatch(route, [](httplib::Client& cli, const std::string& path) { return cli.Get(path); });
}

HttpResponse RoundRobinClient::post(const std::string& route, const std::string& body,
                                    const std::string& content_type) {
  return dispatch(route, [&](httplib::Client& cli, const std::string& path) {
    return cli.Post(path, body, content_type);
  });
}

HttpResponse http_get(const std::string& url, const std::string& route, std::chrono::seconds timeout) {
  const auto u = Url::parse(url);
  auto cli = connect(u, timeout);
  return to_response(cli.Get(u.join(route)), u, route, 0);
}

HttpResponse http_post(const std::string& url, const std::string& route, const std::string& body,
                       std::chrono::seconds timeout) {
  const auto u = Url::parse(url);
  auto cli = connect(u, timeout);
  return to_response(cli.Post(u.join(route), body, "application/json"), u, route, 0);
}

PathOutcome HttpPathClient::shortest_path(const PathRequest& request) {
  HttpResponse resp;
  try {
    resp = client_.post("/path", path_request_to_json(request).dump());
  } catch (const Error& e) {
    throw Error(ErrorCode::kPathServiceUnavailable, e.what());
  }
  json body;
  try {
    body = json::parse(resp.body);
  } catch (const json::exception&) {
    throw Error(ErrorCode::kMalformedResponse, "pathfinder answered " + std::to_string(resp.status) +
                                                   " with a non-JSON body");
  }
  try {
    PathOutcome out;
    if (resp.status == 200) {
      auto path = body.get<PathResult>();
      out.source_node = path.node_ids.front();
      out.source_point = path.points.front();
      out.target_node = path.node_ids.back();
      out.target_point = path.points.back();
      out.path = std::move(path);
      return out;
    }
    const auto error = body.value("error", std::string());
    if (resp.status == 422 && error == "Unreachable") {
      out.source_node = body.at("source_node").get<NodeId>();
      out.source_point = body.at("source_point").get<GeoPoint>();
      out.target_node = body.at("target_node").get<NodeId>();
      out.target_point = body.at("target_point").get<GeoPoint>();
      return out;
    }
    const auto message = body.value("message", error);
    if (error == "UnknownNode") throw Error(ErrorCode::kUnknownNode, message);
    if (error == "NoNodeInRange") throw Error(ErrorCode::kNoNodeInRange, message);
    if (error == "InvalidArgument") throw Error(ErrorCode::kInvalidArgument, message);
    throw Error(ErrorCode::kMalformedResponse,
                "unexpected pathfinder answer " + std::to_string(resp.status) + ": " + message);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedResponse, std::string("bad pathfinder response: ") + e.what());
  }
}

}  // namespace gridplan::net
