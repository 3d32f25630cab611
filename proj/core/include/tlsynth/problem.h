#ifndef TLSYNTH_PROBLEM_H_
#define TLSYNTH_PROBLEM_H_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tlsynth/alphabet.h"
#include "tlsynth/expression.h"
#include "tlsynth/rational.h"

namespace tlsynth {

enum class Aggregation { kSum, kMin, kMax };
enum class Objective { kMin, kMax };

const char* AggregationName(Aggregation a);
const char* ObjectiveName(Objective o);

// One cell of a rule pattern: a concrete symbol, the wildcard "*" (matches
// anything including the placeholder), or the placeholder itself.
struct PatternEntry {
  enum class Kind { kSymbol, kAny, kBottom };
  Kind kind = Kind::kAny;
  Symbol symbol = 0;

  bool Matches(Symbol s) const {
    switch (kind) {
      case Kind::kAny: return true;
      case Kind::kBottom: return s == kBottom;
      case Kind::kSymbol: return s == symbol;
    }
    return false;
  }
  friend bool operator==(const PatternEntry&, const PatternEntry&) = default;
};

struct CostRule {
  std::vector<PatternEntry> x_pattern;  // r+1 entries, oldest first
  std::vector<PatternEntry> y_pattern;
  std::string cost_text;                // "+inf", "-inf" or an expression
  ExtendedCost cost;                    // cost_text under the parameters
};

struct CostBreakdown {
  std::vector<ExtendedCost> per_step;
  ExtendedCost total;
};

struct OptResult {
  ExtendedCost cost;
  Sequence outputs;
};

// Request-answer game whose value is an aggregation of local costs, each a
// function of r+1 consecutive inputs and outputs. Immutable once built.
class LocalProblem {
 public:
  struct Spec {
    std::string name;
    Alphabet inputs;
    Alphabet outputs;
    int horizon_r = 0;
    std::vector<CostRule> rules;  // costs are resolved by the constructor
    Aggregation aggregation = Aggregation::kSum;
    Objective objective = Objective::kMin;
    ParameterMap parameters;
    Sequence initial_outputs;  // r symbols, standing in for y_{1-r}..y_0
  };

  // Validates and resolves rule costs. Throws Error(kValidation) naming the
  // first uncovered reachable window, or a malformed rule.
  explicit LocalProblem(Spec spec);

  const std::string& name() const { return spec_.name; }
  const Alphabet& inputs() const { return spec_.inputs; }
  const Alphabet& outputs() const { return spec_.outputs; }
  int r() const { return spec_.horizon_r; }
  const std::vector<CostRule>& rules() const { return spec_.rules; }
  Aggregation aggregation() const { return spec_.aggregation; }
  Objective objective() const { return spec_.objective; }
  const ParameterMap& parameters() const { return spec_.parameters; }
  const Sequence& initial_outputs() const { return spec_.initial_outputs; }
  const Spec& spec() const { return spec_; }

  // Indices of rules that never win first-match on a reachable window.
  const std::vector<int>& unreachable_rules() const { return unreachable_rules_; }

  // Same problem with some parameters replaced; costs are re-resolved.
  LocalProblem WithParameters(const ParameterMap& overrides) const;

  // First matching rule in declaration order. Windows have r+1 entries,
  // oldest first; kBottom is allowed anywhere. Throws Error(kNoMatchingRule).
  ExtendedCost LookupCost(std::span<const Symbol> x_window,
                          std::span<const Symbol> y_window) const;

  // Index of the first matching rule, if any.
  std::optional<int> MatchRule(std::span<const Symbol> x_window,
                               std::span<const Symbol> y_window) const;

 private:
  void Validate();
  std::optional<int> ScanRules(std::span<const Symbol> x_window,
                               std::span<const Symbol> y_window) const;

  Spec spec_;
  std::vector<int> unreachable_rules_;
  // Winning rule for every fully concrete window pair, -1 if none. Indexed
  // by the base-|X| code of the x-window times |Y|^(r+1) plus the y code.
  std::vector<int> concrete_match_;
};

// Per-step costs and their aggregate. For i < 1, inputs are the placeholder
// and outputs come from initial_outputs. The aggregate of an empty sequence
// is the aggregation's identity (0, +inf for min, -inf for max).
CostBreakdown Evaluate(const LocalProblem& problem, std::span<const Symbol> x_seq,
                       std::span<const Symbol> y_seq);

// Exact offline optimum by dynamic programming over the last r outputs
// (and, for min/max aggregation, the running aggregate). Ties resolve to the
// lexicographically smallest output sequence.
OptResult OfflineOpt(const LocalProblem& problem, std::span<const Symbol> x_seq);

// Window of the r+1 inputs ending at position i (1-based), with kBottom for
// positions before the sequence.
Sequence InputWindow(std::span<const Symbol> x_seq, int r, int i);

}  // namespace tlsynth

#endif  // TLSYNTH_PROBLEM_H_
