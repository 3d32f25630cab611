#ifndef TLSYNTH_SYNTHESIS_H_
#define TLSYNTH_SYNTHESIS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tlsynth/debruijn.h"
#include "tlsynth/policy.h"
#include "tlsynth/problem.h"
#include "tlsynth/ratio_cycle.h"

namespace tlsynth {

struct SynthesisConfig {
  int horizon = 1;
  bool collect_all_optimal = false;
  bool force_self_loops = true;
  bool prune_short_cycles = true;
  int prune_cycle_length = 2;
  int jobs = 1;  // 0: one worker per hardware thread
  int64_t max_candidates = int64_t{1} << 26;
  // Randomized search.
  Rational grid_step{1, 20};
  int refine_rounds = 8;
  // When set, only checks that every candidate has a cycle of at least this
  // ratio; candidates below it are reported as counterexamples.
  std::optional<Rational> verify_lower_bound;
};

struct SynthesisCounters {
  int64_t candidates_examined = 0;
  // Tables excluded up front by self-loop forcing: |Y|^(|X|^T) minus the
  // enumerated count, saturated at INT64_MAX.
  int64_t pruned_by_forcing = 0;
  int64_t pruned_by_short_cycles = 0;
  int64_t fully_evaluated = 0;
  int64_t skipped_overflow = 0;
  double seconds = 0;
};

struct SynthesisResult {
  CycleRatio best_ratio = CycleRatio::Infinite();
  RatioVerdict best_verdict;
  // Deterministic: the lowest-index optimal table, or all optimal tables
  // in lexicographic order.
  std::vector<DeterministicPolicy> optimal;
  // Randomized: the best table found.
  std::optional<RandomizedPolicy> randomized;
  SynthesisCounters counters;
  // Lower-bound mode.
  bool lower_bound_holds = true;
  std::vector<DeterministicPolicy> counterexamples;
};

struct ForcedEntry {
  int64_t window = 0;  // code of c^T
  Symbol output = 0;
  friend bool operator==(const ForcedEntry&, const ForcedEntry&) = default;
};

struct SelfLoopConstraints {
  std::vector<ForcedEntry> forced;
  // Constant windows where every output pays on a free adversary loop.
  std::vector<int64_t> unsatisfiable;
};

// A constant window c^T whose adversary self-loop costs 0 for some
// adversary output forces the unique output whose own self-loop is free.
SelfLoopConstraints ComputeSelfLoopConstraints(const LocalProblem& problem, int horizon);

// Tables consistent with the forced entries, indexed lexicographically by
// the free-entry vector (first free window most significant).
class CandidateSpace {
 public:
  // Throws Error(kSearchSpaceTooLarge) with the exact count past `guard`.
  CandidateSpace(int horizon, Alphabet inputs, Alphabet outputs, std::vector<ForcedEntry> forced, int64_t guard);

  int64_t count() const { return count_; }
  const std::vector<int64_t>& free_windows() const { return free_windows_; }
  void Fill(int64_t index, std::vector<Symbol>& table) const;
  DeterministicPolicy Policy(int64_t index) const;
  // Visits every candidate in order.
  void ForEach(const std::function<void(const DeterministicPolicy&)>& visit) const;

 private:
  int horizon_;
  Alphabet inputs_;
  Alphabet outputs_;
  std::vector<Symbol> base_;
  std::vector<int64_t> free_windows_;
  int64_t count_ = 1;
};

// True when some cycle of at most `length` edges (no repeated interior
// vertex) has ratio above the incumbent, or at least it when !strict.
bool ShortCyclePrune(const DualGraph& graph, const CycleRatio& incumbent, int length, bool strict = false);

SynthesisResult SynthesizeDet(const LocalProblem& problem, const SynthesisConfig& config);

// Best-effort: exhaustive grid sweep, then coordinate refinement. Binary
// alphabets only.
SynthesisResult SynthesizeRand(const LocalProblem& problem, const SynthesisConfig& config);

// Structured rendering with exact and 4-digit ratios, policy tables and
// counters.
std::string DumpSynthesisResult(const LocalProblem& problem, const SynthesisConfig& config,
                                const SynthesisResult& result);

}  // namespace tlsynth

#endif  // TLSYNTH_SYNTHESIS_H_
