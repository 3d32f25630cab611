#include "tlsynth/problem_io.h"

#include <algorithm>
#include <map>

#include "json.hpp"
#include "tlsynth/error.h"

namespace tlsynth {
namespace {

using nlohmann::json;

const std::map<std::string, std::string, std::less<>>& Bundled() {
  static const auto* docs = new std::map<std::string, std::string, std::less<>>{
      {"file-migration", R"({
  "name": "file-migration",
  "inputs": ["0", "1"],
  "outputs": ["0", "1"],
  "r": 1,
  "aggregation": "sum",
  "objective": "min",
  "parameters": {"alpha": "1"},
  "initial_outputs": ["0"],
  "rules": [
    {"x": ["*", "0"], "y": ["0", "0"], "cost": "0"},
    {"x": ["*", "0"], "y": ["1", "1"], "cost": "1"},
    {"x": ["*", "0"], "y": ["1", "0"], "cost": "alpha"},
    {"x": ["*", "0"], "y": ["0", "1"], "cost": "1+alpha"},
    {"x": ["*", "1"], "y": ["1", "1"], "cost": "0"},
    {"x": ["*", "1"], "y": ["0", "0"], "cost": "1"},
    {"x": ["*", "1"], "y": ["0", "1"], "cost": "alpha"},
    {"x": ["*", "1"], "y": ["1", "0"], "cost": "1+alpha"}
  ]
})"},
      {"load-balancing", R"({
  "name": "load-balancing",
  "inputs": ["1", "2"],
  "outputs": ["1", "2"],
  "r": 1,
  "aggregation": "max",
  "objective": "min",
  "parameters": {},
  "initial_outputs": ["1"],
  "rules": [
    {"x": ["1", "*"], "y": ["*", "*"], "cost": "1"},
    {"x": ["2", "*"], "y": ["2", "2"], "cost": "2"},
    {"x": ["2", "*"], "y": ["1", "1"], "cost": "2"},
    {"x": ["2", "*"], "y": ["1", "2"], "cost": "1"},
    {"x": ["2", "*"], "y": ["2", "1"], "cost": "1"},
    {"x": ["_|_", "*"], "y": ["*", "*"], "cost": "1"}
  ]
})"},
      {"max-ind-set", R"({
  "name": "max-ind-set",
  "inputs": ["5", "7"],
  "outputs": ["0", "1"],
  "r": 1,
  "aggregation": "sum",
  "objective": "max",
  "parameters": {},
  "initial_outputs": ["0"],
  "rules": [
    {"x": ["*", "*"], "y": ["*", "0"], "cost": "0"},
    {"x": ["*", "5"], "y": ["0", "1"], "cost": "5"},
    {"x": ["*", "7"], "y": ["0", "1"], "cost": "7"},
    {"x": ["*", "*"], "y": ["1", "1"], "cost": "-inf"}
  ]
})"},
      {"min-dom-set", R"({
  "name": "min-dom-set",
  "inputs": ["1", "2"],
  "outputs": ["0", "1"],
  "r": 2,
  "aggregation": "sum",
  "objective": "min",
  "parameters": {},
  "initial_outputs": ["0", "0"],
  "rules": [
    {"x": ["*", "_|_", "*"], "y": ["*", "*", "*"], "cost": "0"},
    {"x": ["*", "1", "*"], "y": ["*", "1", "*"], "cost": "1"},
    {"x": ["*", "2", "*"], "y": ["*", "1", "*"], "cost": "2"},
    {"x": ["*", "*", "*"], "y": ["*", "0", "1"], "cost": "0"},
    {"x": ["*", "*", "*"], "y": ["1", "0", "*"], "cost": "0"},
    {"x": ["*", "*", "*"], "y": ["0", "0", "0"], "cost": "+inf"}
  ]
})"},
  };
  return *docs;
}

int LineOf(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

[[noreturn]] void FieldError(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kParse, "field '" + field + "': " + what);
}

const json& Require(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) FieldError(field, "missing");
  return *it;
}

// Numbers keep their shortest textual form so "0.3309" stays exact.
std::string ScalarText(const json& v, const std::string& field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  FieldError(field, "expected a string or number");
}

std::vector<std::string> TokenList(const json& doc, const char* field) {
  const json& v = Require(doc, field);
  if (!v.is_array()) FieldError(field, "expected a list of tokens");
  std::vector<std::string> out;
  for (const json& t : v) out.push_back(ScalarText(t, field));
  return out;
}

std::vector<PatternEntry> ParsePattern(const json& cells, const Alphabet& alphabet,
                                       const std::string& field) {
  if (!cells.is_array()) FieldError(field, "expected a list");
  std::vector<PatternEntry> out;
  for (const json& c : cells) {
    std::string tok = ScalarText(c, field);
    PatternEntry e;
    if (tok == "*") {
      e.kind = PatternEntry::Kind::kAny;
    } else if (tok == kBottomToken || tok == "⊥") {
      e.kind = PatternEntry::Kind::kBottom;
    } else {
      auto s = alphabet.Find(tok);
      if (!s) FieldError(field, "unknown token '" + tok + "'");
      e.kind = PatternEntry::Kind::kSymbol;
      e.symbol = *s;
    }
    out.push_back(e);
  }
  return out;
}

json PatternToJson(const std::vector<PatternEntry>& pattern, const Alphabet& alphabet) {
  json out = json::array();
  for (const PatternEntry& e : pattern) {
    switch (e.kind) {
      case PatternEntry::Kind::kAny: out.push_back("*"); break;
      case PatternEntry::Kind::kBottom: out.push_back(std::string(kBottomToken)); break;
      case PatternEntry::Kind::kSymbol: out.push_back(alphabet.token(e.symbol)); break;
    }
  }
  return out;
}

}  // namespace

LocalProblem LoadProblem(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(LineOf(document, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "problem document must be an object");

  LocalProblem::Spec spec;
  const json& name = Require(doc, "name");
  if (!name.is_string()) FieldError("name", "expected a string");
  spec.name = name.get<std::string>();
  spec.inputs = Alphabet(TokenList(doc, "inputs"));
  spec.outputs = Alphabet(TokenList(doc, "outputs"));

  const json& r = Require(doc, "r");
  if (!r.is_number_integer() || r.get<int>() < 0) FieldError("r", "expected a non-negative integer");
  spec.horizon_r = r.get<int>();

  std::string aggr = Require(doc, "aggregation").is_string()
                         ? doc["aggregation"].get<std::string>() : "";
  if (aggr == "sum") {
    spec.aggregation = Aggregation::kSum;
  } else if (aggr == "min") {
    spec.aggregation = Aggregation::kMin;
  } else if (aggr == "max") {
    spec.aggregation = Aggregation::kMax;
  } else {
    FieldError("aggregation", "expected sum, min or max");
  }
  std::string obj = Require(doc, "objective").is_string() ? doc["objective"].get<std::string>() : "";
  if (obj == "min") {
    spec.objective = Objective::kMin;
  } else if (obj == "max") {
    spec.objective = Objective::kMax;
  } else {
    FieldError("objective", "expected min or max");
  }

  if (auto it = doc.find("parameters"); it != doc.end()) {
    if (!it->is_object()) FieldError("parameters", "expected an object");
    for (const auto& [key, value] : it->items()) {
      std::string field = "parameters." + key;
      try {
        spec.parameters[key] = Rational::Parse(ScalarText(value, field));
      } catch (const Error& e) {
        FieldError(field, e.what());
      }
    }
  }

  for (const std::string& tok : TokenList(doc, "initial_outputs")) {
    auto s = spec.outputs.Find(tok);
    if (!s) FieldError("initial_outputs", "unknown output token '" + tok + "'");
    spec.initial_outputs.push_back(*s);
  }

  const json& rules = Require(doc, "rules");
  if (!rules.is_array()) FieldError("rules", "expected a list");
  for (std::size_t k = 0; k < rules.size(); ++k) {
    const json& rule = rules[k];
    std::string field = "rules[" + std::to_string(k) + "]";
    if (!rule.is_object()) FieldError(field, "expected an object");
    CostRule cr;
    cr.x_pattern = ParsePattern(Require(rule, "x"), spec.inputs, field + ".x");
    cr.y_pattern = ParsePattern(Require(rule, "y"), spec.outputs, field + ".y");
    cr.cost_text = ScalarText(Require(rule, "cost"), field + ".cost");
    try {
      cr.cost = EvaluateCost(cr.cost_text, spec.parameters);
    } catch (const Error& e) {
      FieldError(field + ".cost", e.what());
    }
    spec.rules.push_back(std::move(cr));
  }
  return LocalProblem(std::move(spec));
}

std::string DumpProblem(const LocalProblem& problem) {
  json doc;
  doc["name"] = problem.name();
  doc["inputs"] = problem.inputs().tokens();
  doc["outputs"] = problem.outputs().tokens();
  doc["r"] = problem.r();
  doc["aggregation"] = AggregationName(problem.aggregation());
  doc["objective"] = ObjectiveName(problem.objective());
  doc["parameters"] = json::object();
  for (const auto& [k, v] : problem.parameters()) doc["parameters"][k] = v.ToString();
  json init = json::array();
  for (Symbol s : problem.initial_outputs()) init.push_back(problem.outputs().token(s));
  doc["initial_outputs"] = init;
  json rules = json::array();
  for (const CostRule& rule : problem.rules()) {
    rules.push_back({{"x", PatternToJson(rule.x_pattern, problem.inputs())},
                     {"y", PatternToJson(rule.y_pattern, problem.outputs())},
                     {"cost", rule.cost_text.empty() ? rule.cost.ToString() : rule.cost_text}});
  }
  doc["rules"] = rules;
  return doc.dump(2) + "\n";
}

std::vector<std::string> BundledProblemNames() {
  std::vector<std::string> names;
  for (const auto& [name, doc] : Bundled()) names.push_back(name);
  return names;
}

std::string BundledProblemDocument(std::string_view name) {
  auto it = Bundled().find(name);
  if (it == Bundled().end()) {
    throw Error(ErrorCode::kInvalidArgument, "no bundled problem named '" + std::string(name) + "'");
  }
  return it->second;
}

LocalProblem BundledProblem(std::string_view name) { return LoadProblem(BundledProblemDocument(name)); }

LocalProblem FileMigration(const Rational& alpha) {
  return BundledProblem("file-migration").WithParameters({{"alpha", alpha}});
}

}  // namespace tlsynth
