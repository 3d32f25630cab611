#ifndef TLSYNTH_ALPHABET_H_
#define TLSYNTH_ALPHABET_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tlsynth {

// Index of a symbol in its alphabet. kBottom marks the placeholder for
// positions before the start of a sequence.
using Symbol = int32_t;
inline constexpr Symbol kBottom = -1;
inline constexpr std::string_view kBottomToken = "_|_";

using Sequence = std::vector<Symbol>;

// Ordered set of distinct printable tokens with stable indices.
class Alphabet {
 public:
  Alphabet() = default;
  // Throws Error(kValidation) on empty input, duplicates, or a token that
  // collides with the placeholder or wildcard.
  explicit Alphabet(std::vector<std::string> tokens);

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::string& token(Symbol s) const { return tokens_.at(s); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::optional<Symbol> Find(std::string_view token) const;
  // Throws Error(kParse) for unknown tokens.
  Symbol Index(std::string_view token) const;

  // True when every token is a single character, so sequences render as
  // plain strings ("0110") instead of comma lists.
  bool SingleCharTokens() const;

  // Renders a sequence; kBottom prints as "_|_".
  std::string Format(std::span<const Symbol> seq) const;
  // Parses "0110" (single-character alphabets) or "a,b,c".
  Sequence ParseSequence(std::string_view text) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> tokens_;
};

}  // namespace tlsynth

#endif  // TLSYNTH_ALPHABET_H_
