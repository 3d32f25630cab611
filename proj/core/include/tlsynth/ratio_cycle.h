#ifndef TLSYNTH_RATIO_CYCLE_H_
#define TLSYNTH_RATIO_CYCLE_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlsynth/debruijn.h"
#include "tlsynth/rational.h"

namespace tlsynth {

// Cost ratio of a cycle: q/w when w > 0, 1 when q = w = 0, +inf when
// q > 0 = w (or q is +inf).
class CycleRatio {
 public:
  enum class Kind { kFinite, kUnit, kInfinite };

  static CycleRatio Finite(Rational value) { return CycleRatio(Kind::kFinite, value); }
  static CycleRatio Unit() { return CycleRatio(Kind::kUnit, Rational(1)); }
  static CycleRatio Infinite() { return CycleRatio(Kind::kInfinite, Rational(0)); }
  // The case split applied to cycle totals. Both must be non-negative.
  static CycleRatio Of(const ExtendedCost& q, const ExtendedCost& w);

  Kind kind() const { return kind_; }
  bool IsInfinite() const { return kind_ == Kind::kInfinite; }
  // Only valid for non-infinite ratios.
  const Rational& value() const { return value_; }

  // "+inf", "1" or the exact rational.
  std::string ToString() const;
  std::string ToDecimal(int digits) const;

  // Orders by value; the unit case compares as 1, equal to a finite 1.
  friend std::strong_ordering operator<=>(const CycleRatio& a, const CycleRatio& b);
  friend bool operator==(const CycleRatio& a, const CycleRatio& b) { return (a <=> b) == 0; }

 private:
  CycleRatio(Kind kind, Rational value) : kind_(kind), value_(value) {}

  Kind kind_;
  Rational value_;
};

struct CycleReport {
  std::vector<int64_t> edges;     // edge indices in traversal order
  std::vector<int32_t> vertices;  // source vertex of each edge
  ExtendedCost q;
  ExtendedCost w;
  CycleRatio ratio = CycleRatio::Unit();
  Sequence induced_input;
};

struct RatioVerdict {
  enum class Classification { kFinite, kInfinite };
  Classification classification = Classification::kFinite;
  CycleReport best;
  // Lawler iterations (0 for the brute-force oracle and infinite verdicts).
  int iterations = 0;
  // Set when MaxRatioCycle stopped early at its threshold.
  bool stopped_early = false;

  bool finite() const { return classification == Classification::kFinite; }
  const CycleRatio& ratio() const { return best.ratio; }
};

// Closed walk to report: totals, ratio and induced input.
CycleReport MakeReport(const DualGraph& graph, std::vector<int64_t> edges);

// Maximum cost-ratio directed cycle. Edges with w = +inf are ignored (no
// adversary uses them). Stage 1 reports Infinite for a cycle through a
// q = +inf edge or a w = 0 cycle with positive q; stage 2 runs Lawler's
// parametric search with exact Bellman-Ford negative-cycle extraction.
// With `stop_at`, returns as soon as a cycle of ratio >= *stop_at is known.
// Throws Error(kEmptyGraph) if no cycle exists and Error(kUnsupported) for
// negative or -inf weights.
RatioVerdict MaxRatioCycle(const DualGraph& graph, std::optional<CycleRatio> stop_at = std::nullopt);

// Oracle: enumerates every simple cycle. Throws Error(kGraphTooLarge) past
// kBruteForceMaxVertices.
inline constexpr int kBruteForceMaxVertices = 14;
RatioVerdict BruteForceMaxRatio(const DualGraph& graph);

// Structured rendering: classification, exact and 4-digit ratio, totals,
// the witness's vertex labels and its induced input.
std::string DumpVerdict(const DualGraph& graph, const RatioVerdict& verdict);

// Exact (expected) strict competitive ratio of a policy.
RatioVerdict EvaluatePolicy(const LocalProblem& problem, const DeterministicPolicy& policy);
RatioVerdict EvaluatePolicy(const LocalProblem& problem, const RandomizedPolicy& policy);

}  // namespace tlsynth

#endif  // TLSYNTH_RATIO_CYCLE_H_
