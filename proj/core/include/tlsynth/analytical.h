#ifndef TLSYNTH_ANALYTICAL_H_
#define TLSYNTH_ANALYTICAL_H_

// Hand-designed algorithms for two-node file migration, all expressed over
// the input alphabet {"0", "1"} (symbol index = node).

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "tlsynth/policy.h"
#include "tlsynth/rational.h"

namespace tlsynth {

// Segment scale lambda = min(ceil(T/6), floor(alpha)); requires T >= 6 and
// alpha >= 1. Throws Error(kInvalidArgument) otherwise.
int SlidingWindowLambda(int horizon, const Rational& alpha);

// Scans the length-3*lambda segments of the concrete part of `window`,
// newest first, and returns b for the first b-window (at least 2*lambda
// b-requests); 0 if there is none.
Symbol SlidingWindowOutput(std::span<const Symbol> window, int horizon, const Rational& alpha);

class SlidingWindowAlgorithm final : public OnlineAlgorithm {
 public:
  SlidingWindowAlgorithm(int horizon, Rational alpha);

  int horizon() const override { return horizon_; }
  bool clocked() const override { return false; }
  Symbol Output(std::span<const Symbol> window, int64_t time) const override;
  std::string Describe() const override;

  int lambda() const { return lambda_; }

 private:
  int horizon_;
  Rational alpha_;
  int lambda_;
};

// Deterministic strategy k of Mixed Resetting. The file starts at node 0 and
// moves to the current requester after serving the requests at times
// k, k+T, k+2T, ...; the output at time tau is therefore x_m for the latest
// move time m < tau, or node 0 if there was none.
class MixedResettingStrategy final : public OnlineAlgorithm {
 public:
  MixedResettingStrategy(int horizon, int k);

  int horizon() const override { return horizon_; }
  bool clocked() const override { return true; }
  Symbol Output(std::span<const Symbol> window, int64_t time) const override;
  std::string Describe() const override;

  int k() const { return k_; }

 private:
  int horizon_;
  int k_;
};

// Draws k uniformly from [1, T].
MixedResettingStrategy SampleMixedResetting(int horizon, uint64_t seed);

// Horizon minimizing the Mixed Resetting bound: the rounded value of
// alpha + sqrt(20 alpha^2 - 4 alpha + 1) / 2 - 1, at least 1.
int MixedResettingHorizon(double alpha);

// max{2 + 2 alpha / T, 1 + (T + 1) / (2 alpha)}.
Rational MixedResettingBound(int horizon, const Rational& alpha);

enum class CoinFlipAnswer { kMove, kSkip };

// 1 / (2 alpha). Throws Error(kInvalidArgument) if that exceeds 1.
Rational CoinFlipMoveProbability(const Rational& alpha);

// One step of Behavioral Coin Flip: MOVE iff the variate falls below the
// move probability. The answer does not depend on the current location; the
// caller applies MOVE as "file goes to the requester".
CoinFlipAnswer CoinFlipStep(Symbol current_location, Symbol request, const Rational& alpha,
                            uint64_t variate_bits);

// File locations serving each request when Coin Flip answers (T = 1, SKIP
// answer set) are applied from node 0.
Sequence RunCoinFlip(std::span<const Symbol> x_seq, const Rational& alpha, uint64_t seed);

// A classic online algorithm sees the full history x_1..x_{i-1}.
using ClassicAlgorithm = std::function<Symbol(std::span<const Symbol> history)>;

// Rent-or-buy migration for two nodes: move to the requester once the number
// of remote requests since the last move reaches max(1, ceil(alpha)).
ClassicAlgorithm RentOrBuyMigration(const Rational& alpha);

// Clocked wrapper restarting a classic algorithm every T requests: at time
// tau it runs the algorithm on the inputs since the current block start.
class ResetWrapper final : public OnlineAlgorithm {
 public:
  ResetWrapper(int horizon, ClassicAlgorithm algorithm, std::string name = "classic");

  int horizon() const override { return horizon_; }
  bool clocked() const override { return true; }
  Symbol Output(std::span<const Symbol> window, int64_t time) const override;
  std::string Describe() const override;

 private:
  int horizon_;
  ClassicAlgorithm algorithm_;
  std::string name_;
};

// Tabulates an unclocked algorithm over every full window.
// Throws Error(kTableTooLarge) if |X|^T exceeds kMaxTableEntries and
// Error(kInvalidArgument) for clocked algorithms.
DeterministicPolicy CompileToTable(const OnlineAlgorithm& algorithm, int horizon,
                                   const Alphabet& inputs, const Alphabet& outputs);

}  // namespace tlsynth

#endif  // TLSYNTH_ANALYTICAL_H_
