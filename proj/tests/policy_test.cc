#include <string>

#include <gtest/gtest.h>

#include "tlsynth/error.h"
#include "tlsynth/policy.h"
#include "tlsynth/policy_io.h"
#include "tlsynth/problem_io.h"

namespace tlsynth {
namespace {

const Alphabet kBin({"0", "1"});

DeterministicPolicy Table(int horizon, const std::string& bits) {
  Sequence t;
  for (char c : bits) t.push_back(c - '0');
  return DeterministicPolicy(horizon, kBin, kBin, t);
}

RandomizedPolicy RandomizedHorizonThree() {
  std::vector<Rational> p;
  for (const char* s : {"0", "0.3309", "0.2711", "1", "0", "0.7289", "0.6691", "1"}) p.push_back(Rational::Parse(s));
  return RandomizedPolicy(3, kBin, kBin, p);
}

TEST(DeterministicPolicyTest, FollowTheRequest) {
  DeterministicPolicy follow = Table(1, "01");
  EXPECT_EQ(RunPolicy(follow, Sequence{1, 1, 0}), (Sequence{0, 1, 1}));
  EXPECT_TRUE(RunPolicy(follow, Sequence{}).empty());
}

TEST(DeterministicPolicyTest, VisibleWindowPadsWithPlaceholder) {
  Sequence x{1, 0, 1};
  EXPECT_EQ(VisibleWindow(x, 2, 1), (Sequence{kBottom, kBottom}));
  EXPECT_EQ(VisibleWindow(x, 2, 2), (Sequence{kBottom, 1}));
  EXPECT_EQ(VisibleWindow(x, 2, 4), (Sequence{0, 1}));
}

TEST(DeterministicPolicyTest, RejectsWrongTableSize) {
  EXPECT_THROW(DeterministicPolicy(2, kBin, kBin, Sequence{0, 1, 1}), Error);
  EXPECT_THROW(DeterministicPolicy(1, kBin, kBin, Sequence{0, 2}), Error);
}

TEST(RandomizedPolicyTest, DegenerateTables) {
  RandomizedPolicy zeros(2, kBin, kBin, std::vector<Rational>(4, Rational(0)));
  Sequence x{1, 1, 0, 1, 1, 1};
  for (uint64_t seed : {0u, 1u, 99u}) EXPECT_EQ(RunRandomizedOutputs(zeros, x, seed), Sequence(6, 0));
  EXPECT_EQ(RunRandomizedOutputs(RandomizedHorizonThree(), Sequence{0, 0, 0, 0, 0}, 5), Sequence(5, 0));
  RandomizedPolicy lifted = RandomizedPolicy::FromDeterministic(Table(2, "0111"));
  EXPECT_EQ(RunRandomizedOutputs(lifted, x, 3), RunPolicy(Table(2, "0111"), x));
  EXPECT_THROW(RandomizedPolicy(1, kBin, kBin, {Rational(0), Rational(3, 2)}), Error);
}

TEST(RandomizedPolicyTest, SeedsAreReproducible) {
  RandomizedPolicy p = RandomizedHorizonThree();
  Sequence x = kBin.ParseSequence("0110101110010110111000101");
  EXPECT_EQ(RunRandomizedOutputs(p, x, 42), RunRandomizedOutputs(p, x, 42));
  LocalProblem fm = FileMigration(Rational(1));
  ExecutionTrace t = RunRandomized(fm, p, x, 42);
  EXPECT_EQ(t.seed, std::optional<uint64_t>(42));
  EXPECT_EQ(t.cost.total, Evaluate(fm, x, t.outputs).total);
  EXPECT_NE(CoinSource::TrialSeed(1, 0), CoinSource::TrialSeed(1, 1));
  EXPECT_EQ(CoinSource::TrialSeed(7, 3), CoinSource::TrialSeed(7, 3));
}

TEST(RandomizedPolicyTest, VariateThreshold) {
  EXPECT_FALSE(VariateBelow(0, Rational(0)));
  EXPECT_TRUE(VariateBelow(~uint64_t{0}, Rational(1)));
  EXPECT_TRUE(VariateBelow(0, Rational(1, 2)));
  EXPECT_FALSE(VariateBelow(~uint64_t{0}, Rational(1, 2)));
}

TEST(PolicyIoTest, RoundTrips) {
  DeterministicPolicy det = Table(2, "0110");
  AnyPolicy back = LoadPolicy(DumpPolicy(det));
  ASSERT_TRUE(std::holds_alternative<DeterministicPolicy>(back));
  EXPECT_EQ(std::get<DeterministicPolicy>(back), det);

  RandomizedPolicy rnd = RandomizedHorizonThree();
  AnyPolicy back2 = LoadPolicy(DumpPolicy(rnd));
  ASSERT_TRUE(std::holds_alternative<RandomizedPolicy>(back2));
  EXPECT_EQ(std::get<RandomizedPolicy>(back2), rnd);
}

TEST(PolicyIoTest, RejectsIncompleteOrMalformed) {
  const char* missing = R"({"horizon": 1, "inputs": ["0","1"], "outputs": ["0","1"],
                           "kind": "deterministic", "entries": {"0": "0"}})";
  try {
    LoadPolicy(missing);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
  }
  const char* bad_output = R"({"horizon": 1, "inputs": ["0","1"], "outputs": ["0","1"],
                              "kind": "deterministic", "entries": {"0": "0", "1": "2"}})";
  EXPECT_THROW(LoadPolicy(bad_output), Error);
  const char* bad_window = R"({"horizon": 1, "inputs": ["0","1"], "outputs": ["0","1"],
                              "kind": "deterministic", "entries": {"0": "0", "1": "1", "00": "1"}})";
  EXPECT_THROW(LoadPolicy(bad_window), Error);
  EXPECT_THROW(LoadPolicy("[1, 2]"), Error);
}

TEST(PolicyIoTest, MultiCharacterTokensUseCommas) {
  Alphabet words({"lo", "hi"});
  EXPECT_EQ(WindowKey(words, Sequence{1, 0}), "hi,lo");
  EXPECT_EQ(WindowKey(kBin, Sequence{1, 0}), "10");
}

}  // namespace
}  // namespace tlsynth
