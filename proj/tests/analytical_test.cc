#include <map>
#include <random>

#include <gtest/gtest.h>

#include "tlsynth/analytical.h"
#include "tlsynth/error.h"
#include "tlsynth/problem_io.h"

namespace tlsynth {
namespace {

const Alphabet kBin({"0", "1"});

TEST(SlidingWindowTest, Lambda) {
  EXPECT_EQ(SlidingWindowLambda(6, Rational(1)), 1);
  EXPECT_EQ(SlidingWindowLambda(12, Rational(2)), 2);
  EXPECT_EQ(SlidingWindowLambda(12, Rational(5, 2)), 2);
  EXPECT_EQ(SlidingWindowLambda(6, Rational(6)), 1);
  EXPECT_THROW(SlidingWindowLambda(5, Rational(1)), Error);
  EXPECT_THROW(SlidingWindowLambda(6, Rational(1, 2)), Error);
}

TEST(SlidingWindowTest, RuleApplication) {
  EXPECT_EQ(SlidingWindowOutput(Sequence{0, 0, 0, 1, 1, 1}, 6, Rational(1)), 1);
  EXPECT_EQ(SlidingWindowOutput(Sequence{1, 1, 0, 0, 0, 0}, 6, Rational(1)), 0);
  EXPECT_EQ(SlidingWindowOutput(Sequence(6, kBottom), 6, Rational(1)), 0);
  // A lone recent request does not move the file.
  EXPECT_EQ(SlidingWindowOutput(Sequence{0, 0, 0, 0, 0, 1}, 6, Rational(1)), 0);
}

TEST(SlidingWindowTest, CompilesToTable) {
  SlidingWindowAlgorithm alg(6, Rational(1));
  DeterministicPolicy table = CompileToTable(alg, 6, kBin, kBin);
  EXPECT_EQ(table.table().size(), 64u);
  EXPECT_EQ(table.At(63), 1);
  EXPECT_EQ(table.At(0), 0);
  // Same outputs once the horizon is full.
  Sequence x = kBin.ParseSequence("1110001011100011110000101011");
  Sequence a = RunPolicy(alg, x), b = RunPolicy(table, x);
  for (std::size_t i = 6; i < x.size(); ++i) EXPECT_EQ(a[i], b[i]) << i;
}

TEST(MixedResettingTest, HandTrace) {
  // k=2, T=3: moves at tau=2 and tau=5; each move adopts the input T steps back.
  MixedResettingStrategy s(3, 2);
  Alphabet five({"a", "b", "c", "d", "e"});
  Sequence x = five.ParseSequence("a,b,c,d,e,a");
  Sequence y = RunPolicy(s, x);
  EXPECT_EQ(y[2], 1);  // tau=3: b
  EXPECT_EQ(y[3], 1);  // tau=4: b
  EXPECT_EQ(y[4], 1);  // tau=5: b
  EXPECT_EQ(y[5], 4);  // tau=6: e
}

TEST(MixedResettingTest, ConstantZeroInputAndSampling) {
  for (int k = 1; k <= 4; ++k) {
    EXPECT_EQ(RunPolicy(MixedResettingStrategy(4, k), Sequence(20, 0)), Sequence(20, 0));
  }
  EXPECT_THROW(MixedResettingStrategy(3, 0), Error);
  EXPECT_THROW(MixedResettingStrategy(3, 4), Error);
  std::map<int, int> seen;
  for (uint64_t seed = 0; seed < 400; ++seed) ++seen[SampleMixedResetting(4, seed).k()];
  EXPECT_EQ(seen.size(), 4u);
  EXPECT_EQ(SampleMixedResetting(4, 9).k(), SampleMixedResetting(4, 9).k());
}

TEST(MixedResettingTest, HorizonFormula) {
  EXPECT_EQ(MixedResettingHorizon(5.0), 15);
  EXPECT_GE(MixedResettingHorizon(0.1), 1);
  EXPECT_EQ(MixedResettingBound(10, Rational(5)), Rational(3));
}

TEST(CoinFlipTest, MoveProbability) {
  EXPECT_EQ(CoinFlipMoveProbability(Rational(1)), Rational(1, 2));
  EXPECT_EQ(CoinFlipMoveProbability(Rational(1, 2)), Rational(1));
  EXPECT_THROW(CoinFlipMoveProbability(Rational(1, 4)), Error);
  EXPECT_EQ(CoinFlipStep(0, 1, Rational(1, 2), ~uint64_t{0}), CoinFlipAnswer::kMove);
  EXPECT_EQ(CoinFlipStep(0, 1, Rational(1), ~uint64_t{0}), CoinFlipAnswer::kSkip);
  EXPECT_EQ(CoinFlipStep(1, 1, Rational(1), 0), CoinFlipAnswer::kSkip);
}

TEST(CoinFlipTest, ServesLocalRequestsForFree) {
  LocalProblem fm = FileMigration(Rational(1, 2));
  Sequence x = kBin.ParseSequence("1111000011");
  // With alpha = 1/2 it always moves, so it follows the requests one step late.
  Sequence y = RunCoinFlip(x, Rational(1, 2), 3);
  EXPECT_EQ(kBin.Format(y), "0111100001");
  EXPECT_EQ(Evaluate(fm, x, y).total, ExtendedCost(Rational(9, 2)));
  EXPECT_EQ(RunCoinFlip(Sequence(8, 0), Rational(2), 1), Sequence(8, 0));
}

TEST(ResetWrapperTest, RentOrBuyWithinBlocks) {
  ClassicAlgorithm rob = RentOrBuyMigration(Rational(2));
  EXPECT_EQ(rob(Sequence{1}), 0);
  EXPECT_EQ(rob(Sequence{1, 1}), 1);
  ResetWrapper wrapped(4, rob, "rent-or-buy");
  EXPECT_TRUE(wrapped.clocked());
  // History restarts every 4 steps: two 1s inside a block trigger a move.
  Sequence y = RunPolicy(wrapped, kBin.ParseSequence("11111111"));
  EXPECT_EQ(kBin.Format(y), "00110011");
  EXPECT_THROW(CompileToTable(wrapped, 4, kBin, kBin), Error);
}

}  // namespace
}  // namespace tlsynth
