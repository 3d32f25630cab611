#ifndef TLSYNTH_RATIONAL_H_
#define TLSYNTH_RATIONAL_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace tlsynth {

// Exact rational number in lowest terms with a positive denominator.
//
// Storage is 64-bit; every operation computes in 128-bit and throws
// Error(kOverflow) if the reduced result does not fit. Costs, parameters,
// probabilities and ratios all live in this type so that comparisons during
// synthesis are exact.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(int64_t value) : num_(value) {}  // NOLINT: implicit
  Rational(int64_t num, int64_t den);

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }

  bool IsZero() const { return num_ == 0; }
  bool IsInteger() const { return den_ == 1; }
  int Sign() const { return (num_ > 0) - (num_ < 0); }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

  double ToDouble() const { return static_cast<double>(num_) / den_; }

  // "p/q", or "p" for integers.
  std::string ToString() const;
  // Fixed-point rendering with round-half-even on the exact value.
  std::string ToDecimal(int digits) const;

  // Accepts "p/q", integers and finite decimals such as "-0.3309".
  static Rational Parse(std::string_view text);

  std::size_t Hash() const {
    return std::hash<int64_t>()(num_) * 31 + std::hash<int64_t>()(den_);
  }

 private:
  static Rational FromWide(__int128 num, __int128 den);

  int64_t num_ = 0;
  int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational Min(const Rational& a, const Rational& b);
Rational Max(const Rational& a, const Rational& b);

// Cost in R ∪ {-inf, +inf}. Addition saturates; (+inf) + (-inf) throws
// Error(kInfinityClash).
class ExtendedCost {
 public:
  enum class Kind { kNegInf, kFinite, kPosInf };

  constexpr ExtendedCost() = default;
  ExtendedCost(Rational value)  // NOLINT: implicit
      : kind_(Kind::kFinite), value_(value) {}
  ExtendedCost(int64_t value)  // NOLINT: implicit
      : kind_(Kind::kFinite), value_(value) {}

  static ExtendedCost PosInf() { return ExtendedCost(Kind::kPosInf); }
  static ExtendedCost NegInf() { return ExtendedCost(Kind::kNegInf); }

  Kind kind() const { return kind_; }
  bool IsFinite() const { return kind_ == Kind::kFinite; }
  bool IsPosInf() const { return kind_ == Kind::kPosInf; }
  bool IsNegInf() const { return kind_ == Kind::kNegInf; }
  // Only valid for finite costs.
  const Rational& value() const;

  ExtendedCost& operator+=(const ExtendedCost& o);
  friend ExtendedCost operator+(ExtendedCost a, const ExtendedCost& b) {
    return a += b;
  }
  // Scaling by a non-negative factor; 0 * inf is 0 (an impossible event
  // contributes nothing to an expectation).
  ExtendedCost ScaledBy(const Rational& factor) const;

  friend bool operator==(const ExtendedCost& a, const ExtendedCost& b) {
    return a.kind_ == b.kind_ && a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExtendedCost& a,
                                          const ExtendedCost& b);

  // "+inf", "-inf" or the rational's "p/q".
  std::string ToString() const;
  static ExtendedCost Parse(std::string_view text);

 private:
  explicit ExtendedCost(Kind kind) : kind_(kind) {}

  Kind kind_ = Kind::kFinite;
  Rational value_;
};

std::ostream& operator<<(std::ostream& os, const ExtendedCost& c);

}  // namespace tlsynth

#endif  // TLSYNTH_RATIONAL_H_
