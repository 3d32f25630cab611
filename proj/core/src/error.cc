#include "tlsynth/error.h"

namespace tlsynth {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kNoMatchingRule: return "NoMatchingRule";
    case ErrorCode::kInfinityClash: return "InfinityClash";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotAWalk: return "NotAWalk";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kTableTooLarge: return "TableTooLarge";
    case ErrorCode::kSearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorCode::kGraphTooLarge: return "GraphTooLarge";
  }
  return "Error";
}

}  // namespace tlsynth
