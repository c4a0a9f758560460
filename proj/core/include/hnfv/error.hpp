#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hnfv {

enum class ErrorCode {
  kDuplicateId,
  kDisconnectedGraph,
  kServerDegreeViolation,
  kSdnFlagMismatch,
  kInvalidNode,
  kInvalidLink,
  kInvalidFlow,
  kPositionOutOfRange,
  kIngressExceedsCapacity,
  kInconsistentState,
  kValidationFailed,
  kNoFeasiblePath,
  kEmptyCandidateSet,
  kNoExtension,
  kFlowRejected,
  kBudgetExceeded,
  kInfeasible,
  kInfeasibleCounts,
  kConfigParseError,
  kIoError,
  kZeroReference,
  kDegenerateBaseline,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library is reported as an Error carrying
// one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hnfv
