#pragma once

#include <memory>

#include "gridplan/net/config.hpp"
#include "gridplan/net/metrics.hpp"
#include "gridplan/path_service.hpp"

namespace gridplan::net {

/// One HTTP service process worth of state: the role's endpoints plus
/// GET /healthz, GET /metrics and GET /info.
///
/// Monolith mode mounts every endpoint in one server and assembles distance
/// matrices one pair at a time with in-process calls.
class Service {
 public:
  explicit Service(ServiceConfig cfg);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Loads role inputs, binds and serves on a background thread.
  /// Throws kBindError when the address is taken, kConfigError or kIoError
  /// for bad inputs.
  void start();
  void stop();
  /// Blocks until stop() is called.
  void wait();

  int port() const;
  const ServiceConfig& config() const;
  const MetricsRegistry& metrics() const;
  /// Graph cache of pathfinder and monolith roles; null for other roles.
  PathService* path_service();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Runs until SIGINT/SIGTERM. Returns the process exit code.
int run_service(const ServiceConfig& cfg);

}  // namespace gridplan::net
