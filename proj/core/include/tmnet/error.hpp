#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tmnet {

enum class ErrorCode {
  kInvalidArgument,
  // Machine descriptions.
  kUnknownState,
  kUnknownSymbol,
  kDuplicateTransition,
  kTerminalHasOutgoing,
  kMalformedMachine,
  kPopOnEmpty,
  // Interpreters.
  kUndefinedTransition,
  kHeadOutOfRange,
  kUnmappedCharacter,
  // Linear algebra and networks.
  kDimensionMismatch,
  kRankDeficientSystem,
  kWidthMismatch,
  kMalformedDocument,
  kVersionMismatch,
  kMachineMismatch,
  // Circuit builders.
  kIndexCollision,
  kIndexOutOfRange,
  kOverlappingSlices,
  kInvalidArity,
  kNonExclusiveClausesUnsupported,
  // Compilers and simulators.
  kTapeTooLong,
  kNonBinaryActivation,
  kResidualTooLarge,
  kValueOutOfRange,
};

// Stable kebab-case name, used in diagnostics and tests.
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Violation {
  ErrorCode code;
  std::string message;
};

// Thrown by description validators; carries every violation found, in
// the order the description declares the offending items.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const noexcept {
    return violations_;
  }
  bool has(ErrorCode code) const noexcept;

 private:
  std::vector<Violation> violations_;
};

}  // namespace tmnet
