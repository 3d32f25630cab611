#ifndef TLSYNTH_ERROR_H_
#define TLSYNTH_ERROR_H_

#include <stdexcept>
#include <string>

namespace tlsynth {

enum class ErrorCode {
  kParse,
  kValidation,
  kNoMatchingRule,
  kInfinityClash,
  kUnsupported,
  kInvalidArgument,
  kNotAWalk,
  kEmptyGraph,
  kOverflow,
  // Resource guards. The CLI maps these to a distinct exit status.
  kTableTooLarge,
  kSearchSpaceTooLarge,
  kGraphTooLarge,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure raised by the library. The code identifies the contract
// violation; the message carries the offending field, window or count.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }
  bool IsGuard() const {
    return code_ == ErrorCode::kTableTooLarge ||
           code_ == ErrorCode::kSearchSpaceTooLarge ||
           code_ == ErrorCode::kGraphTooLarge;
  }

 private:
  ErrorCode code_;
};

}  // namespace tlsynth

#endif  // TLSYNTH_ERROR_H_
