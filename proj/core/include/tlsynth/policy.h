#ifndef TLSYNTH_POLICY_H_
#define TLSYNTH_POLICY_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tlsynth/alphabet.h"
#include "tlsynth/problem.h"
#include "tlsynth/rational.h"

namespace tlsynth {

// Largest |X|^T a dense table may hold.
inline constexpr int64_t kMaxTableEntries = int64_t{1} << 24;

// Time-local online algorithm under the [T,-1] convention: the output at
// time i (1-based) sees x_{i-T}..x_{i-1}, oldest first, with kBottom for
// positions before the sequence. Implementations are immutable.
class OnlineAlgorithm {
 public:
  virtual ~OnlineAlgorithm() = default;
  virtual int horizon() const = 0;
  virtual bool clocked() const = 0;
  virtual Symbol Output(std::span<const Symbol> window, int64_t time) const = 0;
  virtual std::string Describe() const = 0;
};

// Unclocked deterministic map X^T -> Y stored densely by window code.
class DeterministicPolicy final : public OnlineAlgorithm {
 public:
  // Throws Error(kTableTooLarge) past kMaxTableEntries and
  // Error(kValidation) for a wrongly sized table or out-of-range entries.
  DeterministicPolicy(int horizon, Alphabet inputs, Alphabet outputs, std::vector<Symbol> table);

  // Constant table.
  static DeterministicPolicy Constant(int horizon, Alphabet inputs, Alphabet outputs, Symbol value);

  const Alphabet& inputs() const { return inputs_; }
  const Alphabet& outputs() const { return outputs_; }
  const std::vector<Symbol>& table() const { return table_; }
  Symbol At(int64_t window_code) const { return table_[window_code]; }

  int horizon() const override { return horizon_; }
  bool clocked() const override { return false; }
  // Placeholder positions are read as the first input symbol.
  Symbol Output(std::span<const Symbol> window, int64_t time) const override;
  std::string Describe() const override;

  friend bool operator==(const DeterministicPolicy& a, const DeterministicPolicy& b) {
    return a.horizon_ == b.horizon_ && a.inputs_ == b.inputs_ && a.outputs_ == b.outputs_ &&
           a.table_ == b.table_;
  }

 private:
  int horizon_;
  Alphabet inputs_;
  Alphabet outputs_;
  std::vector<Symbol> table_;
};

// Behavioral randomized map X^T -> [0,1]: the probability of outputting the
// second output symbol ("1"). Output alphabet must be binary.
class RandomizedPolicy {
 public:
  RandomizedPolicy(int horizon, Alphabet inputs, Alphabet outputs, std::vector<Rational> table);

  // The table with 0/1 entries.
  static RandomizedPolicy FromDeterministic(const DeterministicPolicy& policy);

  int horizon() const { return horizon_; }
  const Alphabet& inputs() const { return inputs_; }
  const Alphabet& outputs() const { return outputs_; }
  const std::vector<Rational>& table() const { return table_; }
  const Rational& At(int64_t window_code) const { return table_[window_code]; }
  // Placeholder positions are read as the first input symbol.
  const Rational& ProbabilityOfOne(std::span<const Symbol> window) const;

  friend bool operator==(const RandomizedPolicy& a, const RandomizedPolicy& b) {
    return a.horizon_ == b.horizon_ && a.inputs_ == b.inputs_ && a.outputs_ == b.outputs_ &&
           a.table_ == b.table_;
  }

 private:
  int horizon_;
  Alphabet inputs_;
  Alphabet outputs_;
  std::vector<Rational> table_;
};

struct ExecutionTrace {
  Sequence inputs;
  Sequence outputs;
  CostBreakdown cost;
  std::optional<uint64_t> seed;
};

// Window visible at time i (1-based): x_{i-T}..x_{i-1}, left-padded.
Sequence VisibleWindow(std::span<const Symbol> x_seq, int horizon, int64_t i);

// y_1..y_n for any time-local algorithm.
Sequence RunPolicy(const OnlineAlgorithm& algorithm, std::span<const Symbol> x_seq);

// Uniform variate source for behavioral policies: 64-bit draws from a
// seeded mt19937_64, compared exactly against rational probabilities.
class CoinSource {
 public:
  explicit CoinSource(uint64_t seed) : engine_(seed) {}
  // Seed derived from (base seed, trial index), independent of scheduling.
  static uint64_t TrialSeed(uint64_t base_seed, uint64_t trial);
  // True with probability exactly p (p in [0,1]).
  bool Bernoulli(const Rational& p);
  uint64_t NextBits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Exact comparison u / 2^64 < p.
bool VariateBelow(uint64_t bits, const Rational& p);

// Outputs of a behavioral policy; step i outputs "1" iff a fresh variate is
// below the table entry of its visible window.
Sequence RunRandomizedOutputs(const RandomizedPolicy& policy, std::span<const Symbol> x_seq,
                              uint64_t seed);

ExecutionTrace MakeTrace(const LocalProblem& problem, std::span<const Symbol> x_seq,
                         Sequence outputs, std::optional<uint64_t> seed = std::nullopt);

ExecutionTrace RunRandomized(const LocalProblem& problem, const RandomizedPolicy& policy,
                             std::span<const Symbol> x_seq, uint64_t seed);

}  // namespace tlsynth

#endif  // TLSYNTH_POLICY_H_
