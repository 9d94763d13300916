#pragma once

#include <atomic>
#include <chrono>
#include <string>
#include <vector>

#include "gridplan/mission.hpp"
#include "gridplan/net/url.hpp"

namespace gridplan::net {

struct HttpResponse {
  int status = 0;
  std::string body;
  std::size_t replica = 0;  // index of the replica that answered
};

/// Client-side load balancing over replica URLs. Calls go to replicas in
/// cyclic order; a transport failure or 5xx answer is retried once on the
/// next replica. Two failures raise kAllReplicasFailed. The cursor belongs
/// to this instance only.
class RoundRobinClient {
 public:
  explicit RoundRobinClient(std::vector<std::string> urls,
                            std::chrono::seconds timeout = std::chrono::seconds(60));

  HttpResponse get(const std::string& route);
  HttpResponse post(const std::string& route, const std::string& body,
                    const std::string& content_type = "application/json");

  std::size_t size() const noexcept { return replicas_.size(); }

 private:
  template <typename Call>
  HttpResponse dispatch(const std::string& route, Call&& call);

  std::vector<Url> replicas_;
  std::chrono::seconds timeout_;
  std::atomic<std::size_t> cursor_{0};
};

/// Single GET/POST against one URL, no retry. Throws kTransportError.
HttpResponse http_get(const std::string& url, const std::string& route,
                      std::chrono::seconds timeout = std::chrono::seconds(60));
HttpResponse http_post(const std::string& url, const std::string& route, const std::string& body,
                       std::chrono::seconds timeout = std::chrono::seconds(60));

/// PathClient speaking POST /path to pathfinder replicas.
class HttpPathClient final : public PathClient {
 public:
  explicit HttpPathClient(std::vector<std::string> urls,
                          std::chrono::seconds timeout = std::chrono::seconds(60))
      : client_(std::move(urls), timeout) {}

  PathOutcome shortest_path(const PathRequest& request) override;

 private:
  RoundRobinClient client_;
};

}  // namespace gridplan::net
