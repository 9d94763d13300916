#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

namespace gridplan::net {

/// Request counters and latency histograms for one service, rendered in the
/// plain-text exposition format. Safe to update from concurrent handlers.
class MetricsRegistry {
 public:
  static constexpr std::array<double, 10> kBuckets{0.005, 0.025, 0.1, 0.5, 1, 2.5, 5, 10, 30, 60};
  static constexpr const char* kContentType = "text/plain; version=0.0.4";

  explicit MetricsRegistry(std::string service) : service_(std::move(service)) {}

  void observe(const std::string& route, int status, double seconds);

  std::uint64_t requests(const std::string& route, int status) const;
  std::uint64_t requests(const std::string& route) const;  // all statuses

  std::string exposition() const;
  const std::string& service() const noexcept { return service_; }

 private:
  struct Histogram {
    std::array<std::uint64_t, kBuckets.size()> buckets{};  // non-cumulative
    std::uint64_t count = 0;
    double sum = 0.0;
  };

  std::string service_;
  mutable std::mutex mutex_;
  std::map<std::tuple<std::string, int>, std::uint64_t> counters_;
  std::map<std::string, Histogram> durations_;
};

}  // namespace gridplan::net
