// Randomized and exhaustive cross-checks against independent oracles.

#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.h"
#include "tlsynth/analytical.h"
#include "tlsynth/error.h"
#include "tlsynth/harness.h"
#include "tlsynth/problem_io.h"
#include "tlsynth/ratio_cycle.h"
#include "tlsynth/synthesis.h"

namespace tlsynth {
namespace {

using testing::Bits;
using testing::ExhaustiveOpt;
using testing::RandomRatioGraph;

const Alphabet kBin({"0", "1"});

DeterministicPolicy RandomTable(int horizon, std::mt19937_64& rng, bool forced) {
  Sequence t(std::size_t{1} << horizon);
  for (Symbol& y : t) y = static_cast<Symbol>(rng() & 1);
  if (forced) {
    t.front() = 0;
    t.back() = 1;
  }
  return DeterministicPolicy(horizon, kBin, kBin, t);
}

Sequence Repeat(const Sequence& unit, int times) {
  Sequence out;
  for (int i = 0; i < times; ++i) out.insert(out.end(), unit.begin(), unit.end());
  return out;
}

TEST(OracleTest, OfflineOptMatchesExhaustiveSearch) {
  for (const std::string& name : BundledProblemNames()) {
    LocalProblem p = BundledProblem(name);
    ASSERT_EQ(p.inputs().size(), 2) << name;
    ASSERT_EQ(p.outputs().size(), 2) << name;
    for (int n = 1; n <= 8; ++n) {
      for (uint64_t code = 0; code < (uint64_t{1} << n); ++code) {
        Sequence x = Bits(code, n);
        OptResult dp = OfflineOpt(p, x);
        OptResult oracle = ExhaustiveOpt(p, x);
        ASSERT_EQ(dp.cost, oracle.cost) << name << " x=" << p.inputs().Format(x);
        if (dp.cost.IsFinite()) {
          ASSERT_EQ(dp.outputs, oracle.outputs) << name << " x=" << p.inputs().Format(x);
          ASSERT_EQ(Evaluate(p, x, dp.outputs).total, dp.cost);
        }
      }
    }
  }
}

TEST(OracleTest, MaxRatioCycleMatchesBruteForceOn500Graphs) {
  std::mt19937_64 rng(20240611);
  int infinite = 0, unit = 0;
  for (int trial = 0; trial < 500; ++trial) {
    // A few graphs keep zero-w edges free so unit cycles show up.
    DualGraph g = RandomRatioGraph(rng, 12, trial % 10 == 0);
    RatioVerdict fast = MaxRatioCycle(g);
    RatioVerdict slow = BruteForceMaxRatio(g);
    ASSERT_EQ(fast.ratio(), slow.ratio()) << "trial " << trial << "\n" << DumpGraph(g);
    ASSERT_EQ(fast.finite(), slow.finite()) << "trial " << trial;
    // The witness is a closed walk achieving the reported ratio.
    CycleReport again = MakeReport(g, fast.best.edges);
    ASSERT_EQ(again.ratio, fast.ratio()) << "trial " << trial;
    ASSERT_EQ(again.ratio.kind(), fast.ratio().kind()) << "trial " << trial;
    infinite += !fast.finite();
    unit += fast.ratio().kind() == CycleRatio::Kind::kUnit;
  }
  // The generator exercises every verdict class.
  EXPECT_GT(infinite, 0);
  EXPECT_GT(unit, 0);
}

// Edge taken from vertex v on input x with adversary output b.
int64_t EdgeIndex(const DualGraph& g, int32_t v, Symbol x, Symbol b) {
  return static_cast<int64_t>(v) * g.degree() + x * g.outputs().size() + b;
}

TEST(WalkTest, RunsDecomposeIntoCyclesPlusAShortPath) {
  std::mt19937_64 rng(7);
  for (Rational alpha : {Rational(1, 2), Rational(1), Rational(2)}) {
    LocalProblem fm = FileMigration(alpha);
    for (int horizon = 1; horizon <= 3; ++horizon) {
      for (int rep = 0; rep < 20; ++rep) {
        DeterministicPolicy policy = RandomTable(horizon, rng, true);
        DualGraph g = BuildGraphDet(fm, policy);
        RatioVerdict verdict = MaxRatioCycle(g);
        Sequence x = GenUniform(60, Rational(1, 2), rng());
        Sequence z = GenUniform(60, Rational(1, 3), rng());

        // Follow the run through the graph from the all-0 window.
        std::vector<int64_t> walk;
        int32_t v = 0;
        Rational q_total(0), w_total(0);
        for (std::size_t i = 0; i < x.size(); ++i) {
          int64_t e = EdgeIndex(g, v, x[i], z[i]);
          walk.push_back(e);
          q_total += g.edges()[e].q.value();
          w_total += g.edges()[e].w.value();
          v = g.edges()[e].target;
        }
        // Adversary cost is exact; the algorithm's differs only by the switch
        // charges moved across the two ends of the run.
        ASSERT_EQ(ExtendedCost(w_total), Evaluate(fm, x, z).total);
        Sequence y = RunPolicy(policy, x);
        Sequence extended = x;
        extended.push_back(0);
        Symbol after = RunPolicy(policy, extended).back();
        Rational alg = Evaluate(fm, x, y).total.value();
        Rational shift = (y.back() != after ? alpha : Rational(0)) - (y.front() != 0 ? alpha : Rational(0));
        ASSERT_EQ(alg + shift, q_total);

        // Peel simple cycles off the walk.
        std::vector<int64_t> stack;
        std::map<int32_t, std::size_t> position;  // vertex -> stack depth where it was entered
        Rational q_cycles(0), w_cycles(0);
        position[0] = 0;
        for (int64_t e : walk) {
          stack.push_back(e);
          int32_t t = g.edges()[e].target;
          auto it = position.find(t);
          if (it == position.end()) {
            position[t] = stack.size();
            continue;
          }
          Rational cq(0), cw(0);
          for (std::size_t k = it->second; k < stack.size(); ++k) {
            cq += g.edges()[stack[k]].q.value();
            cw += g.edges()[stack[k]].w.value();
            if (k > it->second) position.erase(g.edges()[stack[k]].source);
          }
          stack.resize(it->second);
          q_cycles += cq;
          w_cycles += cw;
          if (verdict.finite()) {
            // No cycle beats the maximum ratio.
            ASSERT_LE(cq, verdict.ratio().value() * cw);
          }
        }
        Rational q_path(0), w_path(0);
        for (int64_t e : stack) {
          q_path += g.edges()[e].q.value();
          w_path += g.edges()[e].w.value();
        }
        ASSERT_LT(stack.size(), static_cast<std::size_t>(g.vertex_count()));
        ASSERT_EQ(q_cycles + q_path, q_total);
        ASSERT_EQ(w_cycles + w_path, w_total);
      }
    }
  }
}

TEST(WalkTest, WitnessCyclesAreRealizedByPeriodicInputs) {
  std::mt19937_64 rng(11);
  for (Rational alpha : {Rational(1, 2), Rational(1), Rational(2)}) {
    LocalProblem fm = FileMigration(alpha);
    for (int horizon = 1; horizon <= 3; ++horizon) {
      for (int rep = 0; rep < 10; ++rep) {
        DeterministicPolicy policy = RandomTable(horizon, rng, rep % 2 == 0);
        DualGraph g = BuildGraphDet(fm, policy);
        RatioVerdict v = MaxRatioCycle(g);
        const CycleReport& c = v.best;
        Sequence adv;
        for (int64_t e : c.edges) adv.push_back(g.edges()[e].adv_output);
        const int m = 2 + 8 / static_cast<int>(c.edges.size());
        auto alg = [&](int k) {
          Sequence x = Repeat(c.induced_input, k);
          return Evaluate(fm, x, RunPolicy(policy, x)).total.value();
        };
        auto opp = [&](int k) {
          return Evaluate(fm, Repeat(c.induced_input, k), Repeat(adv, k)).total.value();
        };
        ASSERT_EQ(ExtendedCost(alg(m + 1) - alg(m)), c.q);
        ASSERT_EQ(ExtendedCost(opp(m + 1) - opp(m)), c.w);
      }
    }
  }
}

// Output i depends only on inputs i-T..i-1 (and, for clocked algorithms, i).
void ExpectTimeLocal(const OnlineAlgorithm& alg, std::mt19937_64& rng) {
  const int t = alg.horizon();
  for (int rep = 0; rep < 30; ++rep) {
    Sequence x = GenUniform(40, Rational(1, 2), rng());
    Sequence y = RunPolicy(alg, x);
    for (int i = 1; i <= 40; ++i) {
      Sequence other = GenUniform(40, Rational(1, 2), rng());
      for (int j = std::max(1, i - t); j <= i - 1; ++j) other[j - 1] = x[j - 1];
      ASSERT_EQ(RunPolicy(alg, other)[i - 1], y[i - 1]) << alg.Describe() << " i=" << i;
    }
  }
}

TEST(LocalityTest, AlgorithmsAreTimeLocal) {
  std::mt19937_64 rng(3);
  for (int horizon = 1; horizon <= 4; ++horizon) ExpectTimeLocal(RandomTable(horizon, rng, false), rng);
  ExpectTimeLocal(SlidingWindowAlgorithm(6, Rational(1)), rng);
  ExpectTimeLocal(SlidingWindowAlgorithm(12, Rational(2)), rng);
  ExpectTimeLocal(MixedResettingStrategy(5, 3), rng);
  ExpectTimeLocal(ResetWrapper(4, RentOrBuyMigration(Rational(2))), rng);
}

TEST(LocalityTest, ResetWrapperSeesOnlyItsBlock) {
  std::mt19937_64 rng(5);
  ClassicAlgorithm rob = RentOrBuyMigration(Rational(3, 2));
  for (int horizon : {1, 3, 5}) {
    ResetWrapper wrapped(horizon, rob);
    Sequence x = GenUniform(50, Rational(1, 2), rng());
    Sequence y = RunPolicy(wrapped, x);
    for (int i = 1; i <= 50; ++i) {
      int start = horizon * ((i - 1) / horizon) + 1;
      Sequence history(x.begin() + (start - 1), x.begin() + (i - 1));
      ASSERT_EQ(y[i - 1], rob(history)) << "T=" << horizon << " i=" << i;
    }
  }
}

TEST(DeterminismTest, SeededRunsRepeat) {
  LocalProblem fm = FileMigration(Rational(1));
  std::vector<Rational> p;
  for (const char* s : {"0", "0.3309", "0.2711", "1", "0", "0.7289", "0.6691", "1"}) p.push_back(Rational::Parse(s));
  MeasuredAlgorithm alg = Measure(RandomizedPolicy(3, kBin, kBin, p));
  GeneratorSpec gen = GeneratorSpec::Parse("uniform:n=80,p=1/2,seed=12");
  EXPECT_EQ(MeasureRatio(alg, fm, gen, 30, 77).ToCsv(), MeasureRatio(alg, fm, gen, 30, 77).ToCsv());

  SynthesisConfig c;
  c.horizon = 2;
  SynthesisResult a = SynthesizeRand(fm, c);
  c.jobs = 3;
  SynthesisResult b = SynthesizeRand(fm, c);
  EXPECT_EQ(a.best_ratio, b.best_ratio);
  ASSERT_TRUE(a.randomized && b.randomized);
  EXPECT_EQ(*a.randomized, *b.randomized);
}

TEST(PruningTest, SoundForSmallHorizons) {
  for (Rational alpha : {Rational(1, 2), Rational(1), Rational(2)}) {
    LocalProblem fm = FileMigration(alpha);
    for (int horizon = 1; horizon <= 3; ++horizon) {
      SCOPED_TRACE("alpha=" + alpha.ToString() + " T=" + std::to_string(horizon));
      // Exhaustive oracle over every table.
      const int64_t windows = int64_t{1} << horizon;
      std::optional<CycleRatio> best;
      std::set<Sequence> optimal;
      for (uint64_t code = 0; code < (uint64_t{1} << windows); ++code) {
        DeterministicPolicy p(horizon, kBin, kBin, Bits(code, static_cast<int>(windows)));
        CycleRatio r = EvaluatePolicy(fm, p).ratio();
        if (!best || r < *best) {
          best = r;
          optimal.clear();
        }
        if (r == *best) optimal.insert(p.table());
      }
      SynthesisConfig on;
      on.horizon = horizon;
      on.collect_all_optimal = true;
      SynthesisConfig off = on;
      off.force_self_loops = false;
      off.prune_short_cycles = false;
      SynthesisResult with = SynthesizeDet(fm, on);
      SynthesisResult without = SynthesizeDet(fm, off);
      EXPECT_EQ(with.best_ratio, *best);
      EXPECT_EQ(without.best_ratio, *best);
      std::set<Sequence> found;
      for (const DeterministicPolicy& p : with.optimal) found.insert(p.table());
      EXPECT_EQ(found, optimal);
      EXPECT_EQ(without.counters.candidates_examined, int64_t{1} << windows);
    }
  }
}

TEST(MonotonicityTest, LongerHorizonsNeverHurt) {
  for (Rational alpha : {Rational(1, 5), Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)}) {
    LocalProblem fm = FileMigration(alpha);
    std::optional<CycleRatio> previous;
    for (int horizon = 1; horizon <= 3; ++horizon) {
      SynthesisConfig c;
      c.horizon = horizon;
      CycleRatio r = SynthesizeDet(fm, c).best_ratio;
      if (previous) EXPECT_LE(r, *previous) << "alpha=" << alpha << " T=" << horizon;
      previous = r;
    }
  }
}

}  // namespace
}  // namespace tlsynth
