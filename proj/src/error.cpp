#include "conntraj/error.hpp"

namespace conntraj {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::UnattainableSnr: return "UnattainableSnr";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::TooManyPaths: return "TooManyPaths";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::DegenerateSequence: return "DegenerateSequence";
    case ErrorCode::OutOfRange: return "OutOfRange";
  }
  return "Unknown";
}

}  // namespace conntraj
