#ifndef TLSYNTH_WINDOW_CODE_H_
#define TLSYNTH_WINDOW_CODE_H_

#include <cstdint>
#include <span>

#include "tlsynth/alphabet.h"
#include "tlsynth/error.h"

namespace tlsynth {

// Base-|X| positional code of a fixed-length window, oldest symbol most
// significant. Successor drops the oldest symbol and appends a new one.
class WindowCodec {
 public:
  // Throws Error(kTableTooLarge) if base^length exceeds `limit`.
  WindowCodec(int base, int length, int64_t limit = int64_t{1} << 30)
      : base_(base), length_(length) {
    if (base < 1 || length < 0) throw Error(ErrorCode::kInvalidArgument, "bad window shape");
    count_ = 1;
    for (int i = 0; i < length; ++i) {
      if (count_ > limit / base) {
        throw Error(ErrorCode::kTableTooLarge, "window space " + std::to_string(base) + "^" +
                                                   std::to_string(length) + " exceeds limit");
      }
      count_ *= base;
    }
    high_ = length > 0 ? count_ / base : 1;
  }

  int base() const { return base_; }
  int length() const { return length_; }
  int64_t count() const { return count_; }

  int64_t Encode(std::span<const Symbol> window) const {
    int64_t code = 0;
    for (Symbol s : window) code = code * base_ + s;
    return code;
  }

  void Decode(int64_t code, std::span<Symbol> out) const {
    for (int i = length_ - 1; i >= 0; --i) {
      out[i] = static_cast<Symbol>(code % base_);
      code /= base_;
    }
  }

  Sequence Decode(int64_t code) const {
    Sequence out(length_);
    Decode(code, out);
    return out;
  }

  int64_t Successor(int64_t code, Symbol next) const {
    if (length_ == 0) return 0;
    return (code % high_) * base_ + next;
  }

  Symbol Newest(int64_t code) const { return static_cast<Symbol>(code % base_); }

 private:
  int base_;
  int length_;
  int64_t count_ = 1;
  int64_t high_ = 1;
};

}  // namespace tlsynth

#endif  // TLSYNTH_WINDOW_CODE_H_
