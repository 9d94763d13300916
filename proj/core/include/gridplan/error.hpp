#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gridplan {

enum class ErrorCode {
  kInvalidArgument,
  kNoNodeInRange,
  kTransportError,
  kMalformedResponse,
  kDanglingReference,
  kIoError,
  kSchemaVersionMismatch,
  kEmptyStore,
  kCorruptGraphFile,
  kUnknownNode,
  kUnreachable,
  kGraphUnavailable,
  kPathServiceUnavailable,
  kUnreachableTargets,
  kInfeasible,
  kConfigError,
  kBindError,
  kAllReplicasFailed,
  kGraphTooSmall,
  kEndpointDown,
  kWorkloadMismatch,
  kReadinessTimeout,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when one or more mission targets cannot be reached from any UAV.
class UnreachableTargetsError : public Error {
 public:
  explicit UnreachableTargetsError(std::vector<std::int64_t> targets);

  const std::vector<std::int64_t>& targets() const noexcept { return targets_; }

 private:
  std::vector<std::int64_t> targets_;
};

// No path connects the two (already snapped) graph nodes.
class UnreachablePathError : public Error {
 public:
  UnreachablePathError(std::int64_t source, std::int64_t target);

  std::int64_t source() const noexcept { return source_; }
  std::int64_t target() const noexcept { return target_; }

 private:
  std::int64_t source_;
  std::int64_t target_;
};

}  // namespace gridplan
