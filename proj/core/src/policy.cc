#include "tlsynth/policy.h"

#include "tlsynth/error.h"
#include "tlsynth/window_code.h"

namespace tlsynth {
namespace {

int64_t TableSize(int horizon, const Alphabet& inputs) {
  if (horizon < 1) throw Error(ErrorCode::kInvalidArgument, "policy horizon must be at least 1");
  return WindowCodec(inputs.size(), horizon, kMaxTableEntries).count();
}

int64_t PaddedCode(std::span<const Symbol> window, int base) {
  int64_t code = 0;
  for (Symbol s : window) code = code * base + (s == kBottom ? 0 : s);
  return code;
}

}  // namespace

DeterministicPolicy::DeterministicPolicy(int horizon, Alphabet inputs, Alphabet outputs,
                                         std::vector<Symbol> table)
    : horizon_(horizon), inputs_(std::move(inputs)), outputs_(std::move(outputs)),
      table_(std::move(table)) {
  int64_t n = TableSize(horizon_, inputs_);
  if (static_cast<int64_t>(table_.size()) != n) {
    throw Error(ErrorCode::kValidation, "table has " + std::to_string(table_.size()) +
                                            " entries, expected " + std::to_string(n));
  }
  for (Symbol s : table_) {
    if (s < 0 || s >= outputs_.size()) throw Error(ErrorCode::kValidation, "table entry outside Y");
  }
}

DeterministicPolicy DeterministicPolicy::Constant(int horizon, Alphabet inputs, Alphabet outputs,
                                                  Symbol value) {
  int64_t n = TableSize(horizon, inputs);
  return DeterministicPolicy(horizon, std::move(inputs), std::move(outputs),
                             std::vector<Symbol>(n, value));
}

Symbol DeterministicPolicy::Output(std::span<const Symbol> window, int64_t) const {
  return table_[PaddedCode(window, inputs_.size())];
}

std::string DeterministicPolicy::Describe() const {
  std::string s = "table(T=" + std::to_string(horizon_) + ")";
  return s;
}

RandomizedPolicy::RandomizedPolicy(int horizon, Alphabet inputs, Alphabet outputs,
                                   std::vector<Rational> table)
    : horizon_(horizon), inputs_(std::move(inputs)), outputs_(std::move(outputs)),
      table_(std::move(table)) {
  if (outputs_.size() != 2) {
    throw Error(ErrorCode::kValidation, "randomized policies need a binary output alphabet");
  }
  int64_t n = TableSize(horizon_, inputs_);
  if (static_cast<int64_t>(table_.size()) != n) {
    throw Error(ErrorCode::kValidation, "table has " + std::to_string(table_.size()) +
                                            " entries, expected " + std::to_string(n));
  }
  for (const Rational& p : table_) {
    if (p < Rational(0) || p > Rational(1)) {
      throw Error(ErrorCode::kValidation, "probability " + p.ToString() + " outside [0,1]");
    }
  }
}

RandomizedPolicy RandomizedPolicy::FromDeterministic(const DeterministicPolicy& policy) {
  std::vector<Rational> table;
  table.reserve(policy.table().size());
  for (Symbol s : policy.table()) table.emplace_back(s == 1 ? 1 : 0);
  return RandomizedPolicy(policy.horizon(), policy.inputs(), policy.outputs(), std::move(table));
}

const Rational& RandomizedPolicy::ProbabilityOfOne(std::span<const Symbol> window) const {
  return table_[PaddedCode(window, inputs_.size())];
}

Sequence VisibleWindow(std::span<const Symbol> x_seq, int horizon, int64_t i) {
  Sequence w(horizon, kBottom);
  for (int j = 0; j < horizon; ++j) {
    int64_t pos = i - horizon + j;  // 1-based
    if (pos >= 1) w[j] = x_seq[pos - 1];
  }
  return w;
}

Sequence RunPolicy(const OnlineAlgorithm& algorithm, std::span<const Symbol> x_seq) {
  Sequence out;
  out.reserve(x_seq.size());
  for (std::size_t i = 1; i <= x_seq.size(); ++i) {
    Sequence w = VisibleWindow(x_seq, algorithm.horizon(), static_cast<int64_t>(i));
    out.push_back(algorithm.Output(w, static_cast<int64_t>(i)));
  }
  return out;
}

uint64_t CoinSource::TrialSeed(uint64_t base_seed, uint64_t trial) {
  std::seed_seq seq{static_cast<uint32_t>(base_seed), static_cast<uint32_t>(base_seed >> 32),
                    static_cast<uint32_t>(trial), static_cast<uint32_t>(trial >> 32)};
  uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<uint64_t>(words[0]) << 32) | words[1];
}

bool VariateBelow(uint64_t bits, const Rational& p) {
  // bits / 2^64 < num / den  <=>  bits * den < num * 2^64.
  using U = unsigned __int128;
  if (p.Sign() <= 0) return false;
  if (p >= Rational(1)) return true;
  U lhs = static_cast<U>(bits) * static_cast<U>(p.den());
  U rhs = static_cast<U>(p.num()) << 64;
  return lhs < rhs;
}

bool CoinSource::Bernoulli(const Rational& p) { return VariateBelow(NextBits(), p); }

Sequence RunRandomizedOutputs(const RandomizedPolicy& policy, std::span<const Symbol> x_seq,
                              uint64_t seed) {
  CoinSource coins(seed);
  Sequence out;
  out.reserve(x_seq.size());
  for (std::size_t i = 1; i <= x_seq.size(); ++i) {
    Sequence w = VisibleWindow(x_seq, policy.horizon(), static_cast<int64_t>(i));
    out.push_back(coins.Bernoulli(policy.ProbabilityOfOne(w)) ? 1 : 0);
  }
  return out;
}

ExecutionTrace MakeTrace(const LocalProblem& problem, std::span<const Symbol> x_seq,
                         Sequence outputs, std::optional<uint64_t> seed) {
  ExecutionTrace trace;
  trace.inputs.assign(x_seq.begin(), x_seq.end());
  trace.cost = Evaluate(problem, x_seq, outputs);
  trace.outputs = std::move(outputs);
  trace.seed = seed;
  return trace;
}

ExecutionTrace RunRandomized(const LocalProblem& problem, const RandomizedPolicy& policy,
                             std::span<const Symbol> x_seq, uint64_t seed) {
  return MakeTrace(problem, x_seq, RunRandomizedOutputs(policy, x_seq, seed), seed);
}

}  // namespace tlsynth
