#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridplan/mission.hpp"

namespace gridplan::bench {

struct WorkloadSpec {
  std::vector<std::size_t> source_counts{1, 2, 4, 8, 16};
  std::vector<std::size_t> target_counts{1, 2, 4, 8, 16, 32, 64};
  std::size_t reps_per_cell = 10;
  std::uint64_t seed = 0;
  std::string graph_ref;
  bool warmup = true;

  std::size_t cells() const noexcept { return source_counts.size() * target_counts.size(); }
  std::size_t total_requests() const noexcept { return cells() * reps_per_cell; }

  static WorkloadSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

inline constexpr std::size_t kPaperRepsPerCell = 100;

struct WorkloadItem {
  std::size_t sources = 0;
  std::size_t targets = 0;
  std::size_t rep = 0;
  MissionRequest request;
};

struct Workload {
  std::vector<WorkloadItem> items;  // cell-major: sources, then targets, then rep
  std::uint64_t hash = 0;
};

/// Samples sources+targets distinct graph nodes per request with a seeded
/// generator. UAVs start on the sampled tower positions. Throws
/// kGraphTooSmall when the graph has fewer nodes than the largest cell needs.
Workload generate_workload(const WorkloadSpec& spec, const InfrastructureGraph& graph);

/// FNV-1a over the canonical JSON of the request list.
std::uint64_t workload_hash(const std::vector<WorkloadItem>& items);

enum class Outcome { kSuccess, kUnreachable, kError };
std::string_view to_string(Outcome o);
Outcome outcome_from_string(std::string_view s);

struct BenchSample {
  std::size_t sources = 0;
  std::size_t targets = 0;
  std::size_t rep = 0;
  double latency_ms = 0.0;
  Outcome outcome = Outcome::kSuccess;

  friend bool operator==(const BenchSample&, const BenchSample&) = default;
};

struct Deployment {
  std::string mode;  // monolith | microservices
  std::size_t replicas = 1;
};

struct HostInfo {
  unsigned cpus = 0;
  std::uint64_t memory_bytes = 0;

  static HostInfo current();
};

/// mode,replicas,sources,targets,rep,latency_ms,outcome
void write_samples_csv(const std::filesystem::path& file, const Deployment& deployment,
                       const std::vector<BenchSample>& samples);
std::vector<BenchSample> read_samples_csv(const std::filesystem::path& file);

struct CellStats {
  std::size_t sources = 0;
  std::size_t targets = 0;
  std::size_t samples = 0;
  std::size_t successes = 0;
  double mean_ms = 0.0;    // over successes
  double median_ms = 0.0;  // mean of the two middle values for even counts
  double p95_ms = 0.0;     // nearest rank
  double success_rate = 0.0;
};

struct BenchReport {
  Deployment deployment;
  HostInfo host;
  std::uint64_t workload_hash = 0;
  std::vector<CellStats> cells;  // sorted by (sources, targets)

  const CellStats* cell(std::size_t sources, std::size_t targets) const;

  nlohmann::json to_json() const;
  static BenchReport from_json(const nlohmann::json& j);
};

BenchReport aggregate(const std::vector<BenchSample>& samples, const Deployment& deployment,
                      std::uint64_t workload_hash, const HostInfo& host = HostInfo::current());

struct CellComparison {
  std::size_t sources = 0;
  std::size_t targets = 0;
  double mean_a_ms = 0.0;
  double mean_b_ms = 0.0;
  double speedup = 0.0;  // mean_a / mean_b: > 1 means b is faster
};

/// Per-cell speedups of b over a. Throws kWorkloadMismatch unless both
/// reports were produced from the same workload.
std::vector<CellComparison> compare_reports(const BenchReport& a, const BenchReport& b);

/// Writes comparison.csv and plots/{sources_S,targets_T}.svg into out_dir.
void write_comparison(const std::filesystem::path& out_dir, const BenchReport& a, const BenchReport& b,
                      const std::vector<CellComparison>& rows);

}  // namespace gridplan::bench
