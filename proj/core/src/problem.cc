#include "tlsynth/problem.h"

#include <algorithm>

#include "tlsynth/error.h"

namespace tlsynth {
namespace {

constexpr int64_t kDenseTableLimit = int64_t{1} << 22;
constexpr int64_t kStateLimit = int64_t{1} << 22;

int64_t IntPow(int64_t base, int exp) {
  int64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > (int64_t{1} << 40) / std::max<int64_t>(base, 1)) return int64_t{1} << 41;
    v *= base;
  }
  return v;
}

// Decodes `code` as `len` base-`base` digits, oldest (most significant) first.
void DecodeInto(int64_t code, int base, int len, Symbol* out) {
  for (int i = len - 1; i >= 0; --i) {
    out[i] = static_cast<Symbol>(code % base);
    code /= base;
  }
}

bool IsBetter(const ExtendedCost& a, const ExtendedCost& b, Objective obj) {
  return obj == Objective::kMin ? a < b : a > b;
}

ExtendedCost Identity(Aggregation a) {
  switch (a) {
    case Aggregation::kSum: return ExtendedCost(0);
    case Aggregation::kMin: return ExtendedCost::PosInf();
    case Aggregation::kMax: return ExtendedCost::NegInf();
  }
  return ExtendedCost(0);
}

ExtendedCost Combine(Aggregation a, const ExtendedCost& x, const ExtendedCost& y) {
  switch (a) {
    case Aggregation::kSum: return x + y;
    case Aggregation::kMin: return std::min(x, y);
    case Aggregation::kMax: return std::max(x, y);
  }
  return x;
}

std::string DescribeWindow(const LocalProblem::Spec& spec, std::span<const Symbol> xw,
                           std::span<const Symbol> yw) {
  auto fmt = [](const Alphabet& a, std::span<const Symbol> w) {
    std::string s = "(";
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) s += ",";
      s += w[i] == kBottom ? std::string(kBottomToken) : a.token(w[i]);
    }
    return s + ")";
  };
  return "x=" + fmt(spec.inputs, xw) + " y=" + fmt(spec.outputs, yw);
}

}  // namespace

const char* AggregationName(Aggregation a) {
  switch (a) {
    case Aggregation::kSum: return "sum";
    case Aggregation::kMin: return "min";
    case Aggregation::kMax: return "max";
  }
  return "?";
}

const char* ObjectiveName(Objective o) { return o == Objective::kMin ? "min" : "max"; }

LocalProblem::LocalProblem(Spec spec) : spec_(std::move(spec)) { Validate(); }

void LocalProblem::Validate() {
  const int r = spec_.horizon_r;
  if (r < 0) throw Error(ErrorCode::kValidation, "horizon r must be non-negative");
  if (spec_.inputs.size() == 0 || spec_.outputs.size() == 0) {
    throw Error(ErrorCode::kValidation, "alphabets must be non-empty");
  }
  if (static_cast<int>(spec_.initial_outputs.size()) != r) {
    throw Error(ErrorCode::kValidation, "initial_outputs must list exactly r = " +
                                            std::to_string(r) + " symbols");
  }
  for (Symbol s : spec_.initial_outputs) {
    if (s < 0 || s >= spec_.outputs.size()) {
      throw Error(ErrorCode::kValidation, "initial output outside the output alphabet");
    }
  }
  if (spec_.rules.empty()) throw Error(ErrorCode::kValidation, "problem has no rules");
  for (std::size_t k = 0; k < spec_.rules.size(); ++k) {
    CostRule& rule = spec_.rules[k];
    if (static_cast<int>(rule.x_pattern.size()) != r + 1 ||
        static_cast<int>(rule.y_pattern.size()) != r + 1) {
      throw Error(ErrorCode::kValidation,
                  "rule " + std::to_string(k) + ": pattern length must be r+1 = " + std::to_string(r + 1));
    }
    for (const PatternEntry& e : rule.x_pattern) {
      if (e.kind == PatternEntry::Kind::kSymbol && (e.symbol < 0 || e.symbol >= spec_.inputs.size())) {
        throw Error(ErrorCode::kValidation, "rule " + std::to_string(k) + ": input symbol out of range");
      }
    }
    for (const PatternEntry& e : rule.y_pattern) {
      if (e.kind == PatternEntry::Kind::kSymbol && (e.symbol < 0 || e.symbol >= spec_.outputs.size())) {
        throw Error(ErrorCode::kValidation, "rule " + std::to_string(k) + ": output symbol out of range");
      }
    }
    if (!rule.cost_text.empty()) rule.cost = EvaluateCost(rule.cost_text, spec_.parameters);
  }

  const int nx = spec_.inputs.size();
  const int ny = spec_.outputs.size();
  const int64_t x_codes = IntPow(nx, r + 1);
  const int64_t y_codes = IntPow(ny, r + 1);
  const bool dense = x_codes * y_codes <= kDenseTableLimit;
  if (dense) concrete_match_.assign(x_codes * y_codes, -1);

  // Reachable windows: k leading placeholder inputs (k = 0..r) paired with
  // outputs whose first k entries are the last k initial outputs.
  std::vector<char> wins(spec_.rules.size(), 0);
  Sequence xw(r + 1), yw(r + 1);
  for (int k = 0; k <= r; ++k) {
    const int free_x = r + 1 - k;
    const int free_y = r + 1 - k;
    const int64_t nxc = IntPow(nx, free_x);
    const int64_t nyc = IntPow(ny, free_y);
    if (nxc * nyc > kDenseTableLimit * 4) {
      throw Error(ErrorCode::kTableTooLarge, "problem window space too large to validate");
    }
    for (int j = 0; j < k; ++j) {
      xw[j] = kBottom;
      yw[j] = spec_.initial_outputs[r - k + j];
    }
    for (int64_t cx = 0; cx < nxc; ++cx) {
      DecodeInto(cx, nx, free_x, xw.data() + k);
      for (int64_t cy = 0; cy < nyc; ++cy) {
        DecodeInto(cy, ny, free_y, yw.data() + k);
        std::optional<int> m = ScanRules(xw, yw);
        if (!m) {
          throw Error(ErrorCode::kValidation, "no rule covers window " + DescribeWindow(spec_, xw, yw));
        }
        wins[*m] = 1;
      }
    }
  }
  // Concrete windows that are not reachable through the initial outputs
  // (k > 0 positions with other outputs) may still lack a rule; the dense
  // table records -1 there and lookups raise NoMatchingRule.
  if (dense) {
    for (int64_t cx = 0; cx < x_codes; ++cx) {
      DecodeInto(cx, nx, r + 1, xw.data());
      for (int64_t cy = 0; cy < y_codes; ++cy) {
        DecodeInto(cy, ny, r + 1, yw.data());
        std::optional<int> m = ScanRules(xw, yw);
        concrete_match_[cx * y_codes + cy] = m ? *m : -1;
      }
    }
  }
  unreachable_rules_.clear();
  for (std::size_t k = 0; k < wins.size(); ++k) {
    if (!wins[k]) unreachable_rules_.push_back(static_cast<int>(k));
  }
}

LocalProblem LocalProblem::WithParameters(const ParameterMap& overrides) const {
  Spec spec = spec_;
  for (const auto& [name, value] : overrides) spec.parameters[name] = value;
  return LocalProblem(std::move(spec));
}

std::optional<int> LocalProblem::ScanRules(std::span<const Symbol> x_window,
                                           std::span<const Symbol> y_window) const {
  for (std::size_t k = 0; k < spec_.rules.size(); ++k) {
    const CostRule& rule = spec_.rules[k];
    bool ok = true;
    for (std::size_t j = 0; ok && j < x_window.size(); ++j) ok = rule.x_pattern[j].Matches(x_window[j]);
    for (std::size_t j = 0; ok && j < y_window.size(); ++j) ok = rule.y_pattern[j].Matches(y_window[j]);
    if (ok) return static_cast<int>(k);
  }
  return std::nullopt;
}

std::optional<int> LocalProblem::MatchRule(std::span<const Symbol> x_window,
                                           std::span<const Symbol> y_window) const {
  const int r = spec_.horizon_r;
  if (static_cast<int>(x_window.size()) != r + 1 || static_cast<int>(y_window.size()) != r + 1) {
    throw Error(ErrorCode::kInvalidArgument, "window length must be r+1");
  }
  const int nx = spec_.inputs.size();
  const int ny = spec_.outputs.size();
  bool concrete = true;
  int64_t cx = 0, cy = 0;
  for (Symbol s : x_window) {
    if (s == kBottom) {
      concrete = false;
      break;
    }
    if (s < 0 || s >= nx) throw Error(ErrorCode::kInvalidArgument, "input symbol out of range");
    cx = cx * nx + s;
  }
  for (Symbol s : y_window) {
    if (s == kBottom) {
      concrete = false;
      break;
    }
    if (s < 0 || s >= ny) throw Error(ErrorCode::kInvalidArgument, "output symbol out of range");
    cy = cy * ny + s;
  }
  if (concrete && !concrete_match_.empty()) {
    int m = concrete_match_[cx * IntPow(ny, r + 1) + cy];
    if (m < 0) return std::nullopt;
    return m;
  }
  return ScanRules(x_window, y_window);
}

ExtendedCost LocalProblem::LookupCost(std::span<const Symbol> x_window,
                                      std::span<const Symbol> y_window) const {
  std::optional<int> m = MatchRule(x_window, y_window);
  if (!m) {
    throw Error(ErrorCode::kNoMatchingRule, "no rule matches " + DescribeWindow(spec_, x_window, y_window));
  }
  return spec_.rules[*m].cost;
}

Sequence InputWindow(std::span<const Symbol> x_seq, int r, int i) {
  Sequence w(r + 1);
  for (int j = 0; j <= r; ++j) {
    int pos = i - r + j;  // 1-based
    w[j] = pos >= 1 ? x_seq[pos - 1] : kBottom;
  }
  return w;
}

CostBreakdown Evaluate(const LocalProblem& problem, std::span<const Symbol> x_seq,
                       std::span<const Symbol> y_seq) {
  if (x_seq.size() != y_seq.size()) {
    throw Error(ErrorCode::kInvalidArgument, "input and output sequences differ in length");
  }
  const int r = problem.r();
  const int n = static_cast<int>(x_seq.size());
  CostBreakdown out;
  out.per_step.reserve(n);
  out.total = Identity(problem.aggregation());
  Sequence yw(r + 1);
  for (int i = 1; i <= n; ++i) {
    Sequence xw = InputWindow(x_seq, r, i);
    for (int j = 0; j <= r; ++j) {
      int pos = i - r + j;
      yw[j] = pos >= 1 ? y_seq[pos - 1] : problem.initial_outputs()[pos + r - 1];
    }
    ExtendedCost u = problem.LookupCost(xw, yw);
    out.per_step.push_back(u);
    out.total = Combine(problem.aggregation(), out.total, u);
  }
  return out;
}

OptResult OfflineOpt(const LocalProblem& problem, std::span<const Symbol> x_seq) {
  const int n = static_cast<int>(x_seq.size());
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "offline optimum needs a non-empty input");
  const int r = problem.r();
  const int ny = problem.outputs().size();
  const int64_t states = IntPow(ny, r);
  if (states > kStateLimit) throw Error(ErrorCode::kTableTooLarge, "too many DP states");
  const Aggregation aggr = problem.aggregation();
  const Objective obj = problem.objective();
  const int64_t shift = states / std::max<int64_t>(ny, 1);  // ny^(r-1) when r >= 1

  auto next_state = [&](int64_t s, Symbol y) -> int64_t {
    if (r == 0) return 0;
    return (s % shift) * ny + y;
  };

  // value[i][s]: best aggregate of u_i..u_n given the last r outputs before
  // position i are encoded by s. Monotonicity of sum/min/max in the tail
  // value makes this recursion exact without tracking a running aggregate.
  std::vector<std::vector<ExtendedCost>> value(n + 2, std::vector<ExtendedCost>(states));
  std::fill(value[n + 1].begin(), value[n + 1].end(), Identity(aggr));
  Sequence yw(r + 1);
  for (int i = n; i >= 1; --i) {
    Sequence xw = InputWindow(x_seq, r, i);
    for (int64_t s = 0; s < states; ++s) {
      DecodeInto(s, ny, r, yw.data());
      std::optional<ExtendedCost> best;
      for (Symbol y = 0; y < ny; ++y) {
        yw[r] = y;
        ExtendedCost v = Combine(aggr, problem.LookupCost(xw, yw), value[i + 1][next_state(s, y)]);
        if (!best || IsBetter(v, *best, obj)) best = v;
      }
      value[i][s] = *best;
    }
  }

  int64_t s = 0;
  for (Symbol y0 : problem.initial_outputs()) s = s * ny + y0;
  OptResult result;
  result.cost = value[1][s];
  for (int i = 1; i <= n; ++i) {
    Sequence xw = InputWindow(x_seq, r, i);
    DecodeInto(s, ny, r, yw.data());
    for (Symbol y = 0; y < ny; ++y) {
      yw[r] = y;
      ExtendedCost v = Combine(aggr, problem.LookupCost(xw, yw), value[i + 1][next_state(s, y)]);
      if (v == value[i][s]) {
        result.outputs.push_back(y);
        s = next_state(s, y);
        break;
      }
    }
  }
  return result;
}

}  // namespace tlsynth
