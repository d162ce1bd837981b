#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tomeria {

enum class ErrorCode {
  InvalidArgument,
  IllegalMove,
  Capacity,
  PlacementFailure,
  PeekBudgetExhausted,
  StoryEnded,
  RevisionConflict,
  NotFound,
  ModeMismatch,
};

/// Stable kebab-case name used in JSON error bodies and CLI messages.
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tomeria
