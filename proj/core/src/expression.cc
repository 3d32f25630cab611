#include "tlsynth/expression.h"

#include <cctype>

#include "tlsynth/error.h"

namespace tlsynth {
namespace {

class Parser {
 public:
  Parser(std::string_view text, const ParameterMap& params)
      : text_(text), params_(params) {}

  Rational Run() {
    Rational v = Expr();
    SkipSpace();
    if (pos_ != text_.size()) Fail("unexpected trailing input");
    return v;
  }

 private:
  Rational Expr() {
    Rational v = Term();
    for (;;) {
      SkipSpace();
      if (Accept('+')) {
        v += Term();
      } else if (Accept('-')) {
        v -= Term();
      } else {
        return v;
      }
    }
  }

  Rational Term() {
    Rational v = Factor();
    for (;;) {
      SkipSpace();
      if (Accept('*')) {
        v *= Factor();
      } else if (Accept('/')) {
        Rational d = Factor();
        if (d.IsZero()) Fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  Rational Factor() {
    SkipSpace();
    if (Accept('-')) return -Factor();
    if (Accept('(')) {
      Rational v = Expr();
      SkipSpace();
      if (!Accept(')')) Fail("expected ')'");
      return v;
    }
    if (pos_ < text_.size() &&
        (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        ++pos_;
      }
      return Rational::Parse(text_.substr(start, pos_ - start));
    }
    if (pos_ < text_.size() && IsNameChar(text_[pos_], true)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && IsNameChar(text_[pos_], false)) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      auto it = params_.find(name);
      if (it == params_.end()) {
        throw Error(ErrorCode::kValidation, "unknown parameter '" + name + "'");
      }
      return it->second;
    }
    Fail("expected a number, parameter or '('");
    return Rational();
  }

  static bool IsNameChar(char c, bool first) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || (!first && std::isdigit(u));
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool Accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw Error(ErrorCode::kParse, "expression '" + std::string(text_) + "' at offset " +
                                       std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  const ParameterMap& params_;
  std::size_t pos_ = 0;
};

}  // namespace

Rational EvaluateExpression(std::string_view text, const ParameterMap& params) {
  return Parser(text, params).Run();
}

ExtendedCost EvaluateCost(std::string_view text, const ParameterMap& params) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s == "+inf" || s == "inf") return ExtendedCost::PosInf();
  if (s == "-inf") return ExtendedCost::NegInf();
  return ExtendedCost(EvaluateExpression(s, params));
}

}  // namespace tlsynth
