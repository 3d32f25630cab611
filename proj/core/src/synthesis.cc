#include "tlsynth/synthesis.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "tlsynth/error.h"
#include "tlsynth/policy_io.h"
#include "tlsynth/window_code.h"

namespace tlsynth {
namespace {

using nlohmann::ordered_json;

int64_t SaturatingPow(int64_t base, int64_t exp) {
  int64_t p = 1;
  for (int64_t i = 0; i < exp; ++i) {
    if (p > std::numeric_limits<int64_t>::max() / base) return std::numeric_limits<int64_t>::max();
    p *= base;
  }
  return p;
}

std::string PowText(int64_t base, int64_t exp) {
  int64_t p = SaturatingPow(base, exp);
  std::string s = std::to_string(base) + "^" + std::to_string(exp);
  if (p != std::numeric_limits<int64_t>::max()) s += " = " + std::to_string(p);
  return s;
}

// Calls work(i) for i in [0, count) on `jobs` threads; indices are handed
// out in small chunks.
void ParallelFor(int64_t count, int jobs, const std::function<void(int64_t)>& work) {
  if (jobs <= 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<int>(std::min<int64_t>(jobs, std::max<int64_t>(1, count)));
  if (jobs == 1) {
    for (int64_t i = 0; i < count; ++i) work(i);
    return;
  }
  constexpr int64_t kChunk = 32;
  std::atomic<int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      try {
        for (;;) {
          int64_t begin = next.fetch_add(kChunk);
          if (begin >= count) return;
          for (int64_t i = begin; i < std::min(count, begin + kChunk); ++i) work(i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Ratio of a randomized table, or nullopt when exact arithmetic overflows.
std::optional<RatioVerdict> TryEvaluate(const GraphTemplate& tmpl, const RandomizedPolicy& policy) {
  try {
    return MaxRatioCycle(tmpl.Build(policy));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kOverflow) return std::nullopt;
    throw;
  }
}

}  // namespace

SelfLoopConstraints ComputeSelfLoopConstraints(const LocalProblem& problem, int horizon) {
  SelfLoopConstraints out;
  const int nx = problem.inputs().size();
  const int ny = problem.outputs().size();
  WindowCodec codec(nx, horizon, kMaxTableEntries);
  const int k = problem.r() + 1;
  for (Symbol c = 0; c < nx; ++c) {
    Sequence xw(k, c);
    bool free_loop = false;
    std::vector<Symbol> allowed;
    for (Symbol y = 0; y < ny; ++y) {
      ExtendedCost v = problem.LookupCost(xw, Sequence(k, y));
      if (v == ExtendedCost(0)) {
        free_loop = true;
        allowed.push_back(y);
      }
    }
    if (!free_loop) continue;
    int64_t window = codec.Encode(Sequence(horizon, c));
    // The adversary's free loop staying at y costs the algorithm v(c, o^(r+1))
    // when it answers o on c^T.
    if (allowed.size() == 1) {
      out.forced.push_back({window, allowed.front()});
    } else if (allowed.empty()) {
      out.unsatisfiable.push_back(window);
    }
  }
  return out;
}

CandidateSpace::CandidateSpace(int horizon, Alphabet inputs, Alphabet outputs, std::vector<ForcedEntry> forced,
                               int64_t guard)
    : horizon_(horizon), inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
  WindowCodec codec(inputs_.size(), horizon_, kMaxTableEntries);
  base_.assign(codec.count(), 0);
  std::vector<bool> fixed(codec.count(), false);
  for (const ForcedEntry& f : forced) {
    base_[f.window] = f.output;
    fixed[f.window] = true;
  }
  for (int64_t w = 0; w < codec.count(); ++w) {
    if (!fixed[w]) free_windows_.push_back(w);
  }
  const int64_t free = static_cast<int64_t>(free_windows_.size());
  count_ = SaturatingPow(outputs_.size(), free);
  if (count_ > guard) {
    throw Error(ErrorCode::kSearchSpaceTooLarge,
                "search space has " + PowText(outputs_.size(), free) + " candidates, guard is " + std::to_string(guard));
  }
}

void CandidateSpace::Fill(int64_t index, std::vector<Symbol>& table) const {
  table = base_;
  const int ny = outputs_.size();
  for (std::size_t j = free_windows_.size(); j-- > 0;) {
    table[free_windows_[j]] = static_cast<Symbol>(index % ny);
    index /= ny;
  }
}

DeterministicPolicy CandidateSpace::Policy(int64_t index) const {
  std::vector<Symbol> table;
  Fill(index, table);
  return DeterministicPolicy(horizon_, inputs_, outputs_, std::move(table));
}

void CandidateSpace::ForEach(const std::function<void(const DeterministicPolicy&)>& visit) const {
  for (int64_t i = 0; i < count_; ++i) visit(Policy(i));
}

bool ShortCyclePrune(const DualGraph& graph, const CycleRatio& incumbent, int length, bool strict) {
  auto beats = [&](const ExtendedCost& q, const ExtendedCost& w) {
    if (w.IsPosInf()) return false;
    CycleRatio r = CycleRatio::Of(q, w);
    return strict ? r > incumbent : r >= incumbent;
  };
  std::vector<bool> on_path(graph.vertex_count(), false);
  auto dfs = [&](auto&& self, int32_t start, int32_t v, int depth, ExtendedCost q, ExtendedCost w) -> bool {
    for (const DualEdge& d : graph.OutEdges(v)) {
      if (d.target < start || d.w.IsPosInf()) continue;
      ExtendedCost q2 = q + d.q, w2 = w + d.w;
      if (d.target == start) {
        if (beats(q2, w2)) return true;
      } else if (depth + 1 < length && !on_path[d.target]) {
        on_path[d.target] = true;
        bool hit = self(self, start, d.target, depth + 1, q2, w2);
        on_path[d.target] = false;
        if (hit) return true;
      }
    }
    return false;
  };
  for (int32_t s = 0; s < graph.vertex_count(); ++s) {
    if (dfs(dfs, s, s, 0, ExtendedCost(0), ExtendedCost(0))) return true;
  }
  return false;
}

SynthesisResult SynthesizeDet(const LocalProblem& problem, const SynthesisConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.prune_cycle_length < 1) throw Error(ErrorCode::kInvalidArgument, "prune cycle length must be >= 1");
  const GraphTemplate tmpl(problem, config.horizon);
  std::vector<ForcedEntry> forced;
  if (config.force_self_loops) forced = ComputeSelfLoopConstraints(problem, config.horizon).forced;
  const CandidateSpace space(config.horizon, problem.inputs(), problem.outputs(), forced, config.max_candidates);

  SynthesisResult result;
  const int64_t windows = WindowCodec(problem.inputs().size(), config.horizon, kMaxTableEntries).count();
  const int64_t all = SaturatingPow(problem.outputs().size(), windows);
  result.counters.candidates_examined = space.count();
  result.counters.pruned_by_forcing = all == std::numeric_limits<int64_t>::max() ? all : all - space.count();

  std::mutex mu;
  std::optional<CycleRatio> incumbent;
  std::vector<int64_t> best_indices;
  std::vector<std::pair<int64_t, CycleRatio>> below;  // lower-bound mode
  std::atomic<int64_t> pruned{0}, evaluated{0};
  const bool lower_bound_mode = config.verify_lower_bound.has_value();
  const CycleRatio bound = CycleRatio::Finite(config.verify_lower_bound.value_or(Rational(0)));

  ParallelFor(space.count(), config.jobs, [&](int64_t index) {
    const DualGraph graph = tmpl.Build(space.Policy(index));
    if (lower_bound_mode) {
      if (config.prune_short_cycles && ShortCyclePrune(graph, bound, config.prune_cycle_length)) {
        ++pruned;
        return;
      }
      ++evaluated;
      RatioVerdict v = MaxRatioCycle(graph, bound);
      if (v.ratio() < bound) {
        std::lock_guard<std::mutex> lock(mu);
        below.emplace_back(index, v.ratio());
      }
      return;
    }

    std::optional<CycleRatio> seen;
    {
      std::lock_guard<std::mutex> lock(mu);
      seen = incumbent;
    }
    // Ties survive pruning so the reported set does not depend on timing.
    if (seen && config.prune_short_cycles &&
        ShortCyclePrune(graph, *seen, config.prune_cycle_length, /*strict=*/true)) {
      ++pruned;
      return;
    }
    ++evaluated;
    RatioVerdict v = MaxRatioCycle(graph, seen);
    if (v.stopped_early) {
      if (v.ratio() > *seen) return;
      v = MaxRatioCycle(graph);
    }
    std::lock_guard<std::mutex> lock(mu);
    if (!incumbent || v.ratio() < *incumbent) {
      incumbent = v.ratio();
      best_indices = {index};
    } else if (v.ratio() == *incumbent) {
      if (config.collect_all_optimal) {
        best_indices.push_back(index);
      } else {
        best_indices[0] = std::min(best_indices[0], index);
      }
    }
  });
  result.counters.pruned_by_short_cycles = pruned;
  result.counters.fully_evaluated = evaluated;

  if (lower_bound_mode) {
    std::sort(below.begin(), below.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    result.lower_bound_holds = below.empty();
    result.best_ratio = bound;
    for (const auto& [index, ratio] : below) {
      result.counterexamples.push_back(space.Policy(index));
      if (ratio < result.best_ratio) result.best_ratio = ratio;
    }
    if (!below.empty()) {
      result.best_verdict = MaxRatioCycle(tmpl.Build(space.Policy(below.front().first)));
    }
    result.counters.seconds = Seconds(start);
    return result;
  }

  std::sort(best_indices.begin(), best_indices.end());
  for (int64_t index : best_indices) result.optimal.push_back(space.Policy(index));
  result.best_verdict = MaxRatioCycle(tmpl.Build(result.optimal.front()));
  result.best_ratio = result.best_verdict.ratio();
  result.counters.seconds = Seconds(start);
  return result;
}

SynthesisResult SynthesizeRand(const LocalProblem& problem, const SynthesisConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (problem.inputs().size() < 1 || problem.outputs().size() != 2) {
    throw Error(ErrorCode::kUnsupported, "UnsupportedProblem: randomized synthesis needs a binary output alphabet");
  }
  if (config.grid_step.Sign() <= 0 || config.grid_step > Rational(1)) {
    throw Error(ErrorCode::kInvalidArgument, "grid step must lie in (0, 1]");
  }
  const GraphTemplate tmpl(problem, config.horizon);
  const int64_t windows = WindowCodec(problem.inputs().size(), config.horizon, kMaxTableEntries).count();
  std::vector<Rational> base(windows, Rational(0));
  std::vector<bool> fixed(windows, false);
  if (config.force_self_loops) {
    for (const ForcedEntry& f : ComputeSelfLoopConstraints(problem, config.horizon).forced) {
      base[f.window] = Rational(f.output);
      fixed[f.window] = true;
    }
  }
  std::vector<int64_t> free_windows;
  for (int64_t w = 0; w < windows; ++w) {
    if (!fixed[w]) free_windows.push_back(w);
  }

  std::vector<Rational> grid;
  for (Rational p(0); p <= Rational(1); p += config.grid_step) grid.push_back(p);
  if (grid.back() != Rational(1)) grid.push_back(Rational(1));
  const int64_t m = static_cast<int64_t>(grid.size());
  const int64_t count = SaturatingPow(m, static_cast<int64_t>(free_windows.size()));
  if (count > config.max_candidates) {
    throw Error(ErrorCode::kSearchSpaceTooLarge, "grid sweep has " + PowText(m, free_windows.size()) +
                                                     " candidates, guard is " + std::to_string(config.max_candidates));
  }
  auto table_at = [&](int64_t index) {
    std::vector<Rational> table = base;
    for (std::size_t j = free_windows.size(); j-- > 0;) {
      table[free_windows[j]] = grid[index % m];
      index /= m;
    }
    return table;
  };
  auto make = [&](std::vector<Rational> table) {
    return RandomizedPolicy(config.horizon, problem.inputs(), problem.outputs(), std::move(table));
  };

  SynthesisResult result;
  result.counters.candidates_examined = count;
  std::mutex mu;
  std::optional<CycleRatio> best;
  int64_t best_index = -1;
  std::atomic<int64_t> overflow{0};
  ParallelFor(count, config.jobs, [&](int64_t index) {
    std::optional<RatioVerdict> v = TryEvaluate(tmpl, make(table_at(index)));
    if (!v) {
      ++overflow;
      return;
    }
    std::lock_guard<std::mutex> lock(mu);
    if (!best || v->ratio() < *best || (v->ratio() == *best && index < best_index)) {
      best = v->ratio();
      best_index = index;
    }
  });
  int64_t evaluated = count;

  std::vector<Rational> current = table_at(std::max<int64_t>(best_index, 0));
  Rational step = config.grid_step;
  for (int round = 1; round <= config.refine_rounds && best && !best->IsInfinite(); ++round) {
    step = step / Rational(2);
    for (int64_t w : free_windows) {
      for (const Rational& candidate : {current[w] - step, current[w] + step}) {
        if (candidate < Rational(0) || candidate > Rational(1)) continue;
        std::vector<Rational> trial = current;
        trial[w] = candidate;
        ++evaluated;
        std::optional<RatioVerdict> v = TryEvaluate(tmpl, make(trial));
        if (!v) {
          ++overflow;
          continue;
        }
        if (v->ratio() < *best) {
          best = v->ratio();
          current = std::move(trial);
        }
      }
    }
  }

  result.randomized = make(current);
  result.best_verdict = MaxRatioCycle(tmpl.Build(*result.randomized));
  result.best_ratio = result.best_verdict.ratio();
  result.counters.fully_evaluated = evaluated;
  result.counters.skipped_overflow = overflow;
  result.counters.seconds = Seconds(start);
  return result;
}

std::string DumpSynthesisResult(const LocalProblem& problem, const SynthesisConfig& config,
                                const SynthesisResult& result) {
  ordered_json doc;
  doc["problem"] = problem.name();
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : problem.parameters()) params[k] = v.ToString();
  doc["parameters"] = params;
  doc["horizon"] = config.horizon;
  doc["kind"] = result.randomized ? "randomized" : "deterministic";
  if (config.verify_lower_bound) {
    doc["lower_bound"] = config.verify_lower_bound->ToString();
    doc["lower_bound_holds"] = result.lower_bound_holds;
  }
  doc["ratio"] = result.best_ratio.ToString();
  doc["ratio_decimal"] = result.best_ratio.ToDecimal(4);
  doc["classification"] = result.best_ratio.IsInfinite() ? "infinite" : "finite";
  if (!result.best_verdict.best.edges.empty()) {
    const GraphTemplate tmpl(problem, config.horizon);
    std::optional<DualGraph> graph;
    if (result.randomized) {
      graph = tmpl.Build(*result.randomized);
    } else if (!result.optimal.empty()) {
      graph = tmpl.Build(result.optimal.front());
    } else if (!result.counterexamples.empty()) {
      graph = tmpl.Build(result.counterexamples.front());
    }
    if (graph) doc["witness"] = ordered_json::parse(DumpVerdict(*graph, result.best_verdict));
  }
  ordered_json policies = ordered_json::array();
  if (result.randomized) policies.push_back(ordered_json::parse(DumpPolicy(*result.randomized)));
  for (const auto& p : result.optimal) policies.push_back(ordered_json::parse(DumpPolicy(p)));
  doc["policies"] = policies;
  if (config.verify_lower_bound) {
    ordered_json below = ordered_json::array();
    for (const auto& p : result.counterexamples) below.push_back(ordered_json::parse(DumpPolicy(p)));
    doc["counterexamples"] = below;
  }
  const SynthesisCounters& c = result.counters;
  doc["counters"] = {{"candidates_examined", c.candidates_examined},
                     {"pruned_by_forcing", c.pruned_by_forcing},
                     {"pruned_by_short_cycles", c.pruned_by_short_cycles},
                     {"fully_evaluated", c.fully_evaluated},
                     {"skipped_overflow", c.skipped_overflow},
                     {"seconds", c.seconds}};
  return doc.dump(2) + "\n";
}

}  // namespace tlsynth
