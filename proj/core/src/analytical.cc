#include "tlsynth/analytical.h"

#include <cassert>
#include <cmath>
#include <random>

#include "tlsynth/error.h"
#include "tlsynth/window_code.h"

namespace tlsynth {
namespace {

int64_t FloorOf(const Rational& x) {
  int64_t q = x.num() / x.den();
  if (x.num() % x.den() != 0 && x.num() < 0) --q;
  return q;
}

int64_t CeilOf(const Rational& x) { return -FloorOf(-x); }

}  // namespace

int SlidingWindowLambda(int horizon, const Rational& alpha) {
  if (horizon < 6) {
    throw Error(ErrorCode::kInvalidArgument,
                "sliding window needs T >= 6, got " + std::to_string(horizon));
  }
  if (alpha < Rational(1)) {
    throw Error(ErrorCode::kInvalidArgument, "sliding window needs alpha >= 1, got " + alpha.ToString());
  }
  int64_t by_horizon = (horizon + 5) / 6;
  return static_cast<int>(std::min(by_horizon, FloorOf(alpha)));
}

Symbol SlidingWindowOutput(std::span<const Symbol> window, int horizon, const Rational& alpha) {
  const int lambda = SlidingWindowLambda(horizon, alpha);
  const int seg = 3 * lambda;
  // Placeholders only ever occupy a prefix.
  std::size_t first = 0;
  while (first < window.size() && window[first] == kBottom) ++first;
  std::span<const Symbol> concrete = window.subspan(first);
  if (concrete.size() < static_cast<std::size_t>(seg)) return 0;

  // Sliding counts of 1-requests, newest segment first.
  int ones = 0;
  const std::size_t n = concrete.size();
  for (std::size_t j = n - seg; j < n; ++j) ones += concrete[j] == 1;
  for (std::size_t end = n;; --end) {
    const int zeros = seg - ones;
    const bool one_window = ones >= 2 * lambda;
    const bool zero_window = zeros >= 2 * lambda;
    assert(!(one_window && zero_window));
    if (one_window) return 1;
    if (zero_window) return 0;
    if (end == static_cast<std::size_t>(seg)) break;
    ones += (concrete[end - seg - 1] == 1) - (concrete[end - 1] == 1);
  }
  return 0;
}

SlidingWindowAlgorithm::SlidingWindowAlgorithm(int horizon, Rational alpha)
    : horizon_(horizon), alpha_(alpha), lambda_(SlidingWindowLambda(horizon, alpha)) {}

Symbol SlidingWindowAlgorithm::Output(std::span<const Symbol> window, int64_t) const {
  return SlidingWindowOutput(window, horizon_, alpha_);
}

std::string SlidingWindowAlgorithm::Describe() const {
  return "sliding-window(T=" + std::to_string(horizon_) + ", alpha=" + alpha_.ToString() +
         ", lambda=" + std::to_string(lambda_) + ")";
}

MixedResettingStrategy::MixedResettingStrategy(int horizon, int k) : horizon_(horizon), k_(k) {
  if (horizon < 1 || k < 1 || k > horizon) {
    throw Error(ErrorCode::kInvalidArgument, "mixed resetting needs 1 <= k <= T");
  }
}

Symbol MixedResettingStrategy::Output(std::span<const Symbol> window, int64_t time) const {
  if (time <= k_) return 0;
  // Latest move time m < time; the request x_m sits T - (time - m) into the window.
  int64_t m = k_ + horizon_ * ((time - 1 - k_) / horizon_);
  Symbol s = window[horizon_ - (time - m)];
  return s == kBottom ? 0 : s;
}

std::string MixedResettingStrategy::Describe() const {
  return "mixed-resetting(T=" + std::to_string(horizon_) + ", k=" + std::to_string(k_) + ")";
}

MixedResettingStrategy SampleMixedResetting(int horizon, uint64_t seed) {
  if (horizon < 1) throw Error(ErrorCode::kInvalidArgument, "horizon must be at least 1");
  std::mt19937_64 engine(seed);
  std::uniform_int_distribution<int> pick(1, horizon);
  return MixedResettingStrategy(horizon, pick(engine));
}

int MixedResettingHorizon(double alpha) {
  double t = alpha + 0.5 * std::sqrt(20 * alpha * alpha - 4 * alpha + 1) - 1;
  return std::max(1, static_cast<int>(std::lround(t)));
}

Rational MixedResettingBound(int horizon, const Rational& alpha) {
  Rational a = Rational(2) + Rational(2) * alpha / Rational(horizon);
  Rational b = Rational(1) + Rational(horizon + 1) / (Rational(2) * alpha);
  return Max(a, b);
}

Rational CoinFlipMoveProbability(const Rational& alpha) {
  if (alpha.Sign() <= 0 || alpha < Rational(1, 2)) {
    throw Error(ErrorCode::kInvalidArgument,
                "InvalidAlpha: coin flip needs alpha >= 1/2, got " + alpha.ToString());
  }
  return Rational(1) / (Rational(2) * alpha);
}

CoinFlipAnswer CoinFlipStep(Symbol location, Symbol request, const Rational& alpha, uint64_t variate_bits) {
  if (location == request) return CoinFlipAnswer::kSkip;
  return VariateBelow(variate_bits, CoinFlipMoveProbability(alpha)) ? CoinFlipAnswer::kMove
                                                                     : CoinFlipAnswer::kSkip;
}

Sequence RunCoinFlip(std::span<const Symbol> x_seq, const Rational& alpha, uint64_t seed) {
  CoinFlipMoveProbability(alpha);  // validates
  CoinSource coins(seed);
  Sequence out;
  out.reserve(x_seq.size());
  Symbol location = 0;
  for (Symbol x : x_seq) {
    out.push_back(location);
    if (x != location && CoinFlipStep(location, x, alpha, coins.NextBits()) == CoinFlipAnswer::kMove) {
      location = x;
    }
  }
  return out;
}

ClassicAlgorithm RentOrBuyMigration(const Rational& alpha) {
  const int64_t threshold = std::max<int64_t>(1, CeilOf(alpha));
  return [threshold](std::span<const Symbol> history) {
    Symbol location = 0;
    int64_t remote = 0;
    for (Symbol x : history) {
      if (x == location) continue;
      if (++remote >= threshold) {
        location = x;
        remote = 0;
      }
    }
    return location;
  };
}

ResetWrapper::ResetWrapper(int horizon, ClassicAlgorithm algorithm, std::string name)
    : horizon_(horizon), algorithm_(std::move(algorithm)), name_(std::move(name)) {
  if (horizon < 1) throw Error(ErrorCode::kInvalidArgument, "horizon must be at least 1");
}

Symbol ResetWrapper::Output(std::span<const Symbol> window, int64_t time) const {
  int64_t block_start = horizon_ * ((time - 1) / horizon_) + 1;
  std::size_t seen = static_cast<std::size_t>(time - block_start);
  return algorithm_(window.subspan(window.size() - seen));
}

std::string ResetWrapper::Describe() const {
  return "reset-wrapper(T=" + std::to_string(horizon_) + ", " + name_ + ")";
}

DeterministicPolicy CompileToTable(const OnlineAlgorithm& algorithm, int horizon,
                                   const Alphabet& inputs, const Alphabet& outputs) {
  if (algorithm.clocked()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot tabulate a clocked algorithm");
  }
  if (horizon < 1) throw Error(ErrorCode::kInvalidArgument, "horizon must be at least 1");
  WindowCodec codec(inputs.size(), horizon, kMaxTableEntries);
  std::vector<Symbol> table(codec.count());
  Sequence window(horizon);
  for (int64_t code = 0; code < codec.count(); ++code) {
    codec.Decode(code, window);
    table[code] = algorithm.Output(window, horizon + 1);
  }
  return DeterministicPolicy(horizon, inputs, outputs, std::move(table));
}

}  // namespace tlsynth
