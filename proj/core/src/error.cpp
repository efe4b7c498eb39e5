#include "tmnet/error.hpp"

#include <algorithm>

namespace tmnet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kUnknownState: return "unknown-state";
    case ErrorCode::kUnknownSymbol: return "unknown-symbol";
    case ErrorCode::kDuplicateTransition: return "duplicate-transition";
    case ErrorCode::kTerminalHasOutgoing: return "terminal-has-outgoing";
    case ErrorCode::kMalformedMachine: return "malformed-machine";
    case ErrorCode::kPopOnEmpty: return "pop-on-empty";
    case ErrorCode::kUndefinedTransition: return "undefined-transition";
    case ErrorCode::kHeadOutOfRange: return "head-out-of-range";
    case ErrorCode::kUnmappedCharacter: return "unmapped-character";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kRankDeficientSystem: return "rank-deficient-system";
    case ErrorCode::kWidthMismatch: return "width-mismatch";
    case ErrorCode::kMalformedDocument: return "malformed-document";
    case ErrorCode::kVersionMismatch: return "version-mismatch";
    case ErrorCode::kMachineMismatch: return "machine-mismatch";
    case ErrorCode::kIndexCollision: return "index-collision";
    case ErrorCode::kIndexOutOfRange: return "index-out-of-range";
    case ErrorCode::kOverlappingSlices: return "overlapping-slices";
    case ErrorCode::kInvalidArity: return "invalid-arity";
    case ErrorCode::kNonExclusiveClausesUnsupported:
      return "non-exclusive-clauses-unsupported";
    case ErrorCode::kTapeTooLong: return "tape-too-long";
    case ErrorCode::kNonBinaryActivation: return "non-binary-activation";
    case ErrorCode::kResidualTooLarge: return "residual-too-large";
    case ErrorCode::kValueOutOfRange: return "value-out-of-range";
  }
  return "unknown-error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

namespace {

std::string join_violations(const std::vector<Violation>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += std::string(to_string(v.code)) + ": " + v.message;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? ErrorCode::kMalformedMachine
                               : violations.front().code,
            join_violations(violations)),
      violations_(std::move(violations)) {}

bool ValidationError::has(ErrorCode code) const noexcept {
  return std::any_of(violations_.begin(), violations_.end(),
                     [code](const Violation& v) { return v.code == code; });
}

}  // namespace tmnet
