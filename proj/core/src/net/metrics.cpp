#include "gridplan/net/metrics.hpp"

#include <cstdio>
#include <sstream>

namespace gridplan::net {

namespace {

std::string label_value(const std::string& v) {
  std::string out;
  for (char c : v) {
    if (c == '\\' || c == '"') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

void MetricsRegistry::observe(const std::string& route, int status, double seconds) {
  std::lock_guard lock(mutex_);
  ++counters_[{route, status}];
  auto& h = durations_[route];
  for (std::size_t i = 0; i < kBuckets.size(); ++i) {
    if (seconds <= kBuckets[i]) {
      ++h.buckets[i];
      break;
    }
  }
  ++h.count;
  h.sum += seconds;
}

std::uint64_t MetricsRegistry::requests(const std::string& route, int status) const {
  std::lock_guard lock(mutex_);
  const auto it = counters_.find({route, status});
  return it == counters_.end() ? 0 : it->second;
}

std::uint64_t MetricsRegistry::requests(const std::string& route) const {
  std::lock_guard lock(mutex_);
  std::uint64_t n = 0;
  for (const auto& [key, count] : counters_) {
    if (std::get<0>(key) == route) n += count;
  }
  return n;
}

std::string MetricsRegistry::exposition() const {
  std::lock_guard lock(mutex_);
  const auto service = label_value(service_);
  std::ostringstream out;
  out << "# HELP http_requests_total Handled HTTP requests.\n"
      << "# TYPE http_requests_total counter\n";
  for (const auto& [key, count] : counters_) {
    out << "http_requests_total{service=\"" << service << "\",route=\"" << label_value(std::get<0>(key))
        << "\",status=\"" << std::get<1>(key) << "\"} " << count << '\n';
  }
  out << "# HELP request_duration_seconds HTTP request latency.\n"
      << "# TYPE request_duration_seconds histogram\n";
  for (const auto& [route, h] : durations_) {
    const auto labels = "service=\"" + service + "\",route=\"" + label_value(route) + "\"";
    std::uint64_t cumulative = 0;
    for (std::size_t i = 0; i < kBuckets.size(); ++i) {
      cumulative += h.buckets[i];
      out << "request_duration_seconds_bucket{" << labels << ",le=\"" << number(kBuckets[i]) << "\"} " << cumulative
          << '\n';
    }
    out << "request_duration_seconds_bucket{" << labels << ",le=\"+Inf\"} " << h.count << '\n';
    out << "request_duration_seconds_sum{" << labels << "} " << number(h.sum) << '\n';
    out << "request_duration_seconds_count{" << labels << "} " << h.count << '\n';
  }
  return out.str();
}

}  // namespace gridplan::net
