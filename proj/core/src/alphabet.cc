#include "tlsynth/alphabet.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "tlsynth/error.h"

namespace tlsynth {

Alphabet::Alphabet(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) throw Error(ErrorCode::kValidation, "alphabet must be non-empty");
  std::set<std::string> seen;
  for (const std::string& t : tokens_) {
    if (t.empty() || t == kBottomToken || t == "*" ||
        t.find(',') != std::string::npos) {
      throw Error(ErrorCode::kValidation, "invalid alphabet token '" + t + "'");
    }
    for (char c : t) {
      if (!std::isgraph(static_cast<unsigned char>(c))) {
        throw Error(ErrorCode::kValidation, "alphabet token '" + t + "' is not printable");
      }
    }
    if (!seen.insert(t).second) {
      throw Error(ErrorCode::kValidation, "duplicate alphabet token '" + t + "'");
    }
  }
}

std::optional<Symbol> Alphabet::Find(std::string_view token) const {
  auto it = std::find(tokens_.begin(), tokens_.end(), token);
  if (it == tokens_.end()) return std::nullopt;
  return static_cast<Symbol>(it - tokens_.begin());
}

Symbol Alphabet::Index(std::string_view token) const {
  if (auto s = Find(token)) return *s;
  throw Error(ErrorCode::kParse, "unknown symbol '" + std::string(token) + "'");
}

bool Alphabet::SingleCharTokens() const {
  return std::all_of(tokens_.begin(), tokens_.end(),
                     [](const std::string& t) { return t.size() == 1; });
}

std::string Alphabet::Format(std::span<const Symbol> seq) const {
  bool compact = SingleCharTokens();
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!compact && i > 0) out += ',';
    out += seq[i] == kBottom ? std::string(kBottomToken) : token(seq[i]);
  }
  return out;
}

Sequence Alphabet::ParseSequence(std::string_view text) const {
  Sequence seq;
  if (text.empty()) return seq;
  if (text.find(',') != std::string_view::npos || !SingleCharTokens()) {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t comma = text.find(',', start);
      std::string_view tok = text.substr(start, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - start);
      while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
      while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
      seq.push_back(Index(tok));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return seq;
  }
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    seq.push_back(Index(std::string_view(&c, 1)));
  }
  return seq;
}

}  // namespace tlsynth
