#include "tomeria/error.hpp"

namespace tomeria {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::IllegalMove: return "illegal-move";
    case ErrorCode::Capacity: return "capacity";
    case ErrorCode::PlacementFailure: return "placement-failure";
    case ErrorCode::PeekBudgetExhausted: return "peek-budget-exhausted";
    case ErrorCode::StoryEnded: return "story-already-ended";
    case ErrorCode::RevisionConflict: return "revision-conflict";
    case ErrorCode::NotFound: return "not-found";
    case ErrorCode::ModeMismatch: return "mode-mismatch";
  }
  return "unknown";
}

}  // namespace tomeria
