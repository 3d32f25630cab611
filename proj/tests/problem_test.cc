#include <string>

#include <gtest/gtest.h>

#include "tlsynth/alphabet.h"
#include "tlsynth/error.h"
#include "tlsynth/expression.h"
#include "tlsynth/problem.h"
#include "tlsynth/problem_io.h"

namespace tlsynth {
namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kOverflow;
}

TEST(AlphabetTest, FormatsAndParses) {
  Alphabet bin({"0", "1"});
  EXPECT_TRUE(bin.SingleCharTokens());
  EXPECT_EQ(bin.ParseSequence("0110"), (Sequence{0, 1, 1, 0}));
  EXPECT_EQ(bin.Format(Sequence{1, kBottom, 0}), "1_|_0");
  Alphabet words({"red", "blue"});
  EXPECT_EQ(words.ParseSequence("blue,red"), (Sequence{1, 0}));
  EXPECT_EQ(words.Format(Sequence{1, 0}), "blue,red");
  EXPECT_EQ(CodeOf([&] { bin.ParseSequence("012"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { Alphabet({"a", "a"}); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { Alphabet({"*"}); }), ErrorCode::kValidation);
}

TEST(ExpressionTest, EvaluatesWithParameters) {
  ParameterMap p{{"alpha", Rational(3, 2)}};
  EXPECT_EQ(EvaluateExpression("1+alpha", p), Rational(5, 2));
  EXPECT_EQ(EvaluateExpression("(1+alpha)/3", p), Rational(5, 6));
  EXPECT_EQ(EvaluateExpression("2*alpha - 0.5", p), Rational(5, 2));
  EXPECT_EQ(EvaluateExpression("-alpha", p), Rational(-3, 2));
  EXPECT_EQ(CodeOf([&] { EvaluateExpression("beta", p); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([&] { EvaluateExpression("1+", p); }), ErrorCode::kParse);
  EXPECT_TRUE(EvaluateCost("+inf", p).IsPosInf());
}

TEST(LocalCostTest, FileMigrationTable) {
  LocalProblem fm = FileMigration(Rational(1));
  EXPECT_EQ(fm.LookupCost(Sequence{1, 0}, Sequence{0, 0}), ExtendedCost(0));
  EXPECT_EQ(fm.LookupCost(Sequence{1, 0}, Sequence{1, 0}), ExtendedCost(1));
  LocalProblem fm2 = FileMigration(Rational(2));
  EXPECT_EQ(fm2.LookupCost(Sequence{0, 1}, Sequence{1, 0}), ExtendedCost(3));
  // The wildcard also matches the placeholder.
  EXPECT_EQ(fm2.LookupCost(Sequence{kBottom, 1}, Sequence{0, 1}), ExtendedCost(2));
}

TEST(LocalCostTest, BundledProblemsLoad) {
  for (const std::string& name : BundledProblemNames()) {
    SCOPED_TRACE(name);
    LocalProblem p = BundledProblem(name);
    EXPECT_EQ(p.name(), name);
    // Serializing and re-loading gives the same rules.
    LocalProblem again = LoadProblem(DumpProblem(p));
    EXPECT_EQ(again.rules().size(), p.rules().size());
    EXPECT_EQ(again.r(), p.r());
    EXPECT_EQ(again.initial_outputs(), p.initial_outputs());
  }
  LocalProblem mds = BundledProblem("min-dom-set");
  EXPECT_EQ(mds.r(), 2);
  bool has_inf = false;
  for (const CostRule& rule : mds.rules()) has_inf = has_inf || rule.cost.IsPosInf();
  EXPECT_TRUE(has_inf);
  EXPECT_EQ(CodeOf([] { BundledProblem("nope"); }), ErrorCode::kInvalidArgument);
}

TEST(LocalCostTest, IncompleteCoverageIsRejected) {
  std::string doc = R"({
    "name": "gap", "inputs": ["0", "1"], "outputs": ["0", "1"], "r": 1,
    "aggregation": "sum", "objective": "min", "initial_outputs": ["0"],
    "rules": [
      {"x": ["*", "*"], "y": ["0", "*"], "cost": "0"},
      {"x": ["*", "*"], "y": ["1", "0"], "cost": "1"},
      {"x": ["*", "1"], "y": ["1", "1"], "cost": "1"}
    ]})";
  try {
    LoadProblem(doc);
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
    EXPECT_NE(std::string(e.what()).find("0"), std::string::npos);
  }
}

TEST(LocalCostTest, MalformedDocumentsAreParseErrors) {
  EXPECT_EQ(CodeOf([] { LoadProblem("{"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { LoadProblem(R"({"name": "x"})"); }), ErrorCode::kParse);
}

TEST(LocalCostTest, WithParametersReresolves) {
  LocalProblem fm = FileMigration(Rational(1));
  LocalProblem fm3 = fm.WithParameters({{"alpha", Rational(3)}});
  EXPECT_EQ(fm3.LookupCost(Sequence{0, 0}, Sequence{1, 0}), ExtendedCost(3));
  EXPECT_EQ(fm.LookupCost(Sequence{0, 0}, Sequence{1, 0}), ExtendedCost(1));
}

TEST(EvaluateTest, Totals) {
  LocalProblem fm = FileMigration(Rational(1));
  EXPECT_EQ(Evaluate(fm, Sequence{0, 0, 0}, Sequence{0, 0, 0}).total, ExtendedCost(0));
  CostBreakdown b = Evaluate(fm, Sequence{1, 1}, Sequence{1, 1});
  ASSERT_EQ(b.per_step.size(), 2u);
  EXPECT_EQ(b.per_step[0], ExtendedCost(1));
  EXPECT_EQ(b.per_step[1], ExtendedCost(0));
  EXPECT_EQ(b.total, ExtendedCost(1));
  EXPECT_EQ(Evaluate(fm, Sequence{}, Sequence{}).total, ExtendedCost(0));

  LocalProblem mis = BundledProblem("max-ind-set");
  Sequence x = mis.inputs().ParseSequence("57");
  EXPECT_TRUE(Evaluate(mis, x, Sequence{1, 1}).total.IsNegInf());
  EXPECT_EQ(Evaluate(mis, x, Sequence{0, 1}).total, ExtendedCost(7));
}

TEST(EvaluateTest, MaxAggregation) {
  LocalProblem lb = BundledProblem("load-balancing");
  Sequence x = lb.inputs().ParseSequence("122");
  Sequence y = lb.outputs().ParseSequence("121");
  EXPECT_EQ(Evaluate(lb, x, y).total, ExtendedCost(1));
  EXPECT_EQ(Evaluate(lb, x, lb.outputs().ParseSequence("111")).total, ExtendedCost(2));
}

TEST(OfflineOptTest, FileMigrationExamples) {
  LocalProblem fm = FileMigration(Rational(1));
  OptResult zeros = OfflineOpt(fm, Sequence{0, 0, 0, 0});
  EXPECT_EQ(zeros.cost, ExtendedCost(0));
  EXPECT_EQ(zeros.outputs, (Sequence{0, 0, 0, 0}));
  EXPECT_EQ(OfflineOpt(fm, Sequence{1, 1, 1, 1}).cost, ExtendedCost(1));
  OptResult alt = OfflineOpt(fm, Sequence{1, 0, 1, 0});
  EXPECT_EQ(alt.cost, ExtendedCost(2));
  EXPECT_EQ(Evaluate(fm, Sequence{1, 0, 1, 0}, alt.outputs).total, alt.cost);
}

TEST(OfflineOptTest, MaximizationAndInfeasibility) {
  LocalProblem mis = BundledProblem("max-ind-set");
  OptResult r = OfflineOpt(mis, mis.inputs().ParseSequence("575"));
  EXPECT_EQ(r.cost, ExtendedCost(10));
  EXPECT_EQ(mis.outputs().Format(r.outputs), "101");
  LocalProblem mds = BundledProblem("min-dom-set");
  OptResult d = OfflineOpt(mds, mds.inputs().ParseSequence("111"));
  EXPECT_EQ(d.cost, ExtendedCost(1));
}

}  // namespace
}  // namespace tlsynth
