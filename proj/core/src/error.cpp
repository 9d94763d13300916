#include "gridplan/error.hpp"

namespace gridplan {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNoNodeInRange: return "NoNodeInRange";
    case ErrorCode::kTransportError: return "TransportError";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::kEmptyStore: return "EmptyStore";
    case ErrorCode::kCorruptGraphFile: return "CorruptGraphFile";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kUnreachable: return "Unreachable";
    case ErrorCode::kGraphUnavailable: return "GraphUnavailable";
    case ErrorCode::kPathServiceUnavailable: return "PathServiceUnavailable";
    case ErrorCode::kUnreachableTargets: return "UnreachableTargets";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kBindError: return "BindError";
    case ErrorCode::kAllReplicasFailed: return "AllReplicasFailed";
    case ErrorCode::kGraphTooSmall: return "GraphTooSmall";
    case ErrorCode::kEndpointDown: return "EndpointDown";
    case ErrorCode::kWorkloadMismatch: return "WorkloadMismatch";
    case ErrorCode::kReadinessTimeout: return "ReadinessTimeout";
  }
  return "Unknown";
}

namespace {

std::string describe(const std::vector<std::int64_t>& targets) {
  std::string out = "targets unreachable from every UAV:";
  for (auto id : targets) {
    out += ' ';
    out += std::to_string(id);
  }
  return out;
}

}  // namespace

UnreachableTargetsError::UnreachableTargetsError(std::vector<std::int64_t> targets)
    : Error(ErrorCode::kUnreachableTargets, describe(targets)),
      targets_(std::move(targets)) {}

UnreachablePathError::UnreachablePathError(std::int64_t source, std::int64_t target)
    : Error(ErrorCode::kUnreachable,
            "no path from " + std::to_string(source) + " to " + std::to_string(target)),
      source_(source),
      target_(target) {}

}  // namespace gridplan
