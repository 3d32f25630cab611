#include "tlsynth/rational.h"

#include <cctype>
#include <cstdlib>
#include <limits>
#include <string>

#include "tlsynth/error.h"

namespace tlsynth {
namespace {

using Wide = __int128;

Wide Gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool FitsInt64(Wide v) {
  return v >= std::numeric_limits<int64_t>::min() &&
         v <= std::numeric_limits<int64_t>::max();
}

// Parses an unsigned run of digits; rejects empty input and overflow.
Wide ParseDigits(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw Error(ErrorCode::kParse, "malformed rational '" + std::string(whole) + "'");
  }
  Wide v = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw Error(ErrorCode::kParse, "malformed rational '" + std::string(whole) + "'");
    }
    v = v * 10 + (c - '0');
    if (v > std::numeric_limits<int64_t>::max()) {
      throw Error(ErrorCode::kOverflow, "rational literal too large '" + std::string(whole) + "'");
    }
  }
  return v;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational::Rational(int64_t num, int64_t den) {
  *this = FromWide(num, den);
}

Rational Rational::FromWide(Wide num, Wide den) {
  if (den == 0) throw Error(ErrorCode::kInvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = Gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (!FitsInt64(num) || !FitsInt64(den)) {
    throw Error(ErrorCode::kOverflow, "rational result exceeds 64-bit range");
  }
  Rational r;
  r.num_ = static_cast<int64_t>(num);
  r.den_ = static_cast<int64_t>(den);
  return r;
}

Rational Rational::operator-() const { return FromWide(-static_cast<Wide>(num_), den_); }

Rational& Rational::operator+=(const Rational& o) {
  if (den_ == o.den_) {
    *this = FromWide(static_cast<Wide>(num_) + o.num_, den_);
  } else {
    *this = FromWide(static_cast<Wide>(num_) * o.den_ + static_cast<Wide>(o.num_) * den_,
                     static_cast<Wide>(den_) * o.den_);
  }
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  *this = FromWide(static_cast<Wide>(num_) * o.num_, static_cast<Wide>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw Error(ErrorCode::kInvalidArgument, "division by zero");
  *this = FromWide(static_cast<Wide>(num_) * o.den_, static_cast<Wide>(den_) * o.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  Wide lhs = static_cast<Wide>(a.num_) * b.den_;
  Wide rhs = static_cast<Wide>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::ToString() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::ToDecimal(int digits) const {
  Wide scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Wide n = static_cast<Wide>(num_) * scale;
  bool negative = n < 0;
  if (negative) n = -n;
  Wide q = n / den_;
  Wide rem = n % den_;
  // Round half to even on the exact remainder.
  Wide twice = rem * 2;
  if (twice > den_ || (twice == den_ && q % 2 == 1)) ++q;
  Wide int_part = q / scale;
  Wide frac_part = q % scale;
  std::string out = negative && q != 0 ? "-" : "";
  out += std::to_string(static_cast<int64_t>(int_part));
  if (digits > 0) {
    std::string frac = std::to_string(static_cast<int64_t>(frac_part));
    out += "." + std::string(digits - frac.size(), '0') + frac;
  }
  return out;
}

Rational Rational::Parse(std::string_view text) {
  std::string_view s = Trim(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Wide num = 0;
  Wide den = 1;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    num = ParseDigits(Trim(s.substr(0, slash)), text);
    den = ParseDigits(Trim(s.substr(slash + 1)), text);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) ParseDigits("", text);
    num = int_part.empty() ? 0 : ParseDigits(int_part, text);
    for (char c : frac_part) {
      if (!std::isdigit(static_cast<unsigned char>(c))) ParseDigits("x", text);
      num = num * 10 + (c - '0');
      den *= 10;
      if (num > std::numeric_limits<int64_t>::max() || den > std::numeric_limits<int64_t>::max()) {
        throw Error(ErrorCode::kOverflow, "decimal literal too precise '" + std::string(text) + "'");
      }
    }
  } else {
    num = ParseDigits(s, text);
  }
  return FromWide(negative ? -num : num, den);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.ToString(); }

Rational Min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational Max(const Rational& a, const Rational& b) { return a < b ? b : a; }

const Rational& ExtendedCost::value() const {
  if (kind_ != Kind::kFinite) {
    throw Error(ErrorCode::kInvalidArgument, "infinite cost has no finite value");
  }
  return value_;
}

ExtendedCost& ExtendedCost::operator+=(const ExtendedCost& o) {
  if (kind_ == Kind::kFinite && o.kind_ == Kind::kFinite) {
    value_ += o.value_;
    return *this;
  }
  if ((kind_ == Kind::kPosInf && o.kind_ == Kind::kNegInf) ||
      (kind_ == Kind::kNegInf && o.kind_ == Kind::kPosInf)) {
    throw Error(ErrorCode::kInfinityClash, "(+inf) + (-inf)");
  }
  if (kind_ == Kind::kFinite) {
    kind_ = o.kind_;
    value_ = Rational();
  }
  return *this;
}

ExtendedCost ExtendedCost::ScaledBy(const Rational& factor) const {
  if (factor.Sign() < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative scale factor");
  }
  if (factor.IsZero()) return ExtendedCost(0);
  if (kind_ != Kind::kFinite) return *this;
  return ExtendedCost(value_ * factor);
}

std::strong_ordering operator<=>(const ExtendedCost& a, const ExtendedCost& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  if (a.kind_ != ExtendedCost::Kind::kFinite) return std::strong_ordering::equal;
  return a.value_ <=> b.value_;
}

std::string ExtendedCost::ToString() const {
  switch (kind_) {
    case Kind::kPosInf: return "+inf";
    case Kind::kNegInf: return "-inf";
    case Kind::kFinite: break;
  }
  return value_.ToString();
}

ExtendedCost ExtendedCost::Parse(std::string_view text) {
  std::string_view s = Trim(text);
  if (s == "+inf" || s == "inf" || s == "+∞" || s == "∞") return PosInf();
  if (s == "-inf" || s == "-∞") return NegInf();
  return ExtendedCost(Rational::Parse(s));
}

std::ostream& operator<<(std::ostream& os, const ExtendedCost& c) { return os << c.ToString(); }

}  // namespace tlsynth
