#include <gtest/gtest.h>

#include "tlsynth/debruijn.h"
#include "tlsynth/error.h"
#include "tlsynth/problem_io.h"
#include "tlsynth/ratio_cycle.h"

namespace tlsynth {
namespace {

const Alphabet kBin({"0", "1"});

DeterministicPolicy Table(int horizon, const std::string& bits) {
  Sequence t;
  for (char c : bits) t.push_back(c - '0');
  return DeterministicPolicy(horizon, kBin, kBin, t);
}

// Repeats `unit` `times` times.
Sequence Repeat(const Sequence& unit, int times) {
  Sequence out;
  for (int i = 0; i < times; ++i) out.insert(out.end(), unit.begin(), unit.end());
  return out;
}

TEST(GraphTemplateTest, FileMigrationShape) {
  LocalProblem fm = FileMigration(Rational(1));
  for (int t = 1; t <= 4; ++t) {
    GraphTemplate tmpl(fm, t);
    EXPECT_TRUE(tmpl.decomposed());
    EXPECT_EQ(tmpl.window_length(), t);  // T + r - 1 with r = 1
    EXPECT_EQ(tmpl.vertex_count(), (1 << t) * 2);
  }
  DualGraph g = BuildGraphDet(fm, Table(2, "0011"));
  EXPECT_EQ(g.vertex_count(), 8);
  EXPECT_EQ(g.degree(), 4);
  ASSERT_EQ(g.edges().size(), 32u);
  // Edges of v are ordered by input, then adversary output.
  for (int32_t v = 0; v < g.vertex_count(); ++v) {
    auto out = g.OutEdges(v);
    for (int k = 0; k < g.degree(); ++k) {
      EXPECT_EQ(out[k].source, v);
      EXPECT_EQ(out[k].input, k / 2);
      EXPECT_EQ(out[k].adv_output, k % 2);
    }
  }
  EXPECT_EQ(g.VertexLabel(5), "10|1");
}

TEST(GraphTemplateTest, AdversaryCostsAreLocalCosts) {
  LocalProblem fm = FileMigration(Rational(3, 2));
  DualGraph g = BuildGraphDet(fm, Table(1, "01"));
  for (const DualEdge& e : g.edges()) {
    Symbol prev = g.VertexAdversary(e.source)[0];
    EXPECT_EQ(e.w, fm.LookupCost(Sequence{kBottom, e.input}, Sequence{prev, e.adv_output}));
  }
}

TEST(GraphTemplateTest, RejectsUnsupportedProblems) {
  try {
    GraphTemplate(BundledProblem("load-balancing"), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupported);
    EXPECT_NE(std::string(e.what()).find("UnsupportedAggregation"), std::string::npos);
  }
  EXPECT_THROW(GraphTemplate(BundledProblem("max-ind-set"), 1), Error);
  EXPECT_THROW(GraphTemplate(FileMigration(Rational(1)), 0), Error);
  EXPECT_THROW(GraphTemplate(FileMigration(Rational(1)), 40), Error);
}

TEST(GraphTemplateTest, NonDecomposableProblemKeepsFullWindows) {
  LocalProblem mds = BundledProblem("min-dom-set");
  GraphTemplate tmpl(mds, 1);
  EXPECT_FALSE(tmpl.decomposed());
  EXPECT_EQ(tmpl.window_length(), 3);  // T + r
  DualGraph g = tmpl.Build(DeterministicPolicy::Constant(1, mds.inputs(), mds.outputs(), 1));
  EXPECT_EQ(g.vertex_count(), 8 * 4);
}

TEST(GraphTemplateTest, RandomizedExpectation) {
  LocalProblem fm = FileMigration(Rational(1));
  RandomizedPolicy half(1, kBin, kBin, {Rational(1, 2), Rational(1, 2)});
  DualGraph g = BuildGraphRand(fm, half);
  // From window 0 with adversary at 0, input 1: serve 1/2 + move 1 * (1/4 + 1/4).
  EXPECT_EQ(g.edges()[2].input, 1);
  EXPECT_EQ(g.edges()[2].q, ExtendedCost(1));

  // A 0/1 table gives the deterministic graph edge for edge.
  DeterministicPolicy det = Table(2, "0111");
  DualGraph a = BuildGraphDet(fm, det);
  DualGraph b = BuildGraphRand(fm, RandomizedPolicy::FromDeterministic(det));
  ASSERT_EQ(a.edges().size(), b.edges().size());
  for (std::size_t e = 0; e < a.edges().size(); ++e) {
    EXPECT_EQ(a.edges()[e].q, b.edges()[e].q) << e;
    EXPECT_EQ(a.edges()[e].w, b.edges()[e].w) << e;
    EXPECT_EQ(a.edges()[e].target, b.edges()[e].target) << e;
  }
}

TEST(InducedInputTest, Walks) {
  LocalProblem fm = FileMigration(Rational(1));
  DualGraph g = BuildGraphDet(fm, Table(2, "0001"));
  // Self-loop at the all-0 window with adversary output 0.
  EXPECT_EQ(kBin.Format(InducedInput(g, std::vector<int64_t>{0})), "0");
  // 01|0 -> 10|0 -> 01|0.
  int64_t to10 = 2 * g.degree() + 0 * 2 + 0;  // vertex 01|0 is 2, input 0
  int64_t to01 = 4 * g.degree() + 1 * 2 + 0;  // vertex 10|0 is 4, input 1
  EXPECT_EQ(kBin.Format(InducedInput(g, std::vector<int64_t>{to10, to01})), "01");
  try {
    InducedInput(g, std::vector<int64_t>{to10});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotAWalk);
  }
}

TEST(InducedInputTest, Policy0001CycleRealization) {
  // Candidate 0001 at T=2, alpha=1: the worst cycle makes it pay 3 + 2 alpha
  // per traversal while the adversary pays 1.
  LocalProblem fm = FileMigration(Rational(1));
  DualGraph g = BuildGraphDet(fm, Table(2, "0001"));
  RatioVerdict v = MaxRatioCycle(g);
  ASSERT_TRUE(v.finite());
  EXPECT_EQ(v.ratio(), CycleRatio::Finite(Rational(5)));
  EXPECT_EQ(v.best.q, ExtendedCost(5));
  EXPECT_EQ(v.best.w, ExtendedCost(1));

  Sequence unit = v.best.induced_input;
  Sequence adv;
  for (int64_t e : v.best.edges) adv.push_back(g.edges()[e].adv_output);
  DeterministicPolicy table = Table(2, "0001");
  auto alg_cost = [&](int m) { return Evaluate(fm, Repeat(unit, m), RunPolicy(table, Repeat(unit, m))).total; };
  auto adv_cost = [&](int m) { return Evaluate(fm, Repeat(unit, m), Repeat(adv, m)).total; };
  EXPECT_EQ(alg_cost(6).value() - alg_cost(5).value(), Rational(5));
  EXPECT_EQ(adv_cost(6).value() - adv_cost(5).value(), Rational(1));
}

TEST(DumpGraphTest, MentionsEveryVertex) {
  DualGraph g = BuildGraphDet(FileMigration(Rational(1)), Table(1, "01"));
  std::string dump = DumpGraph(g);
  for (int32_t v = 0; v < g.vertex_count(); ++v) {
    EXPECT_NE(dump.find(g.VertexLabel(v)), std::string::npos);
  }
}

}  // namespace
}  // namespace tlsynth
