#include "tlsynth/ratio_cycle.h"

#include <algorithm>
#include <deque>
#include <numeric>

#include "json.hpp"
#include "tlsynth/error.h"
#include "tlsynth/policy_io.h"

namespace tlsynth {
namespace {

using Int = __int128;

// Edges an adversary might traverse: w finite. Rejects negative weights.
std::vector<int64_t> ActiveEdges(const DualGraph& graph) {
  std::vector<int64_t> active;
  const auto& edges = graph.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const DualEdge& e = edges[i];
    for (const ExtendedCost* c : {&e.w, &e.q}) {
      if (c->IsNegInf() || (c->IsFinite() && c->value().Sign() < 0)) {
        throw Error(ErrorCode::kUnsupported, "edge " + std::to_string(i) + " has negative weight " + c->ToString());
      }
    }
    if (!e.w.IsPosInf()) active.push_back(static_cast<int64_t>(i));
  }
  return active;
}

// Strongly connected components (iterative Tarjan) of the subgraph formed
// by `subset`.
std::vector<int32_t> Components(const DualGraph& graph, const std::vector<int64_t>& subset) {
  const int32_t n = graph.vertex_count();
  const auto& edges = graph.edges();
  std::vector<int32_t> head(n + 1, 0);
  for (int64_t e : subset) ++head[edges[e].source + 1];
  std::partial_sum(head.begin(), head.end(), head.begin());
  std::vector<int32_t> adj(subset.size());
  {
    std::vector<int32_t> fill(head.begin(), head.end() - 1);
    for (int64_t e : subset) adj[fill[edges[e].source]++] = edges[e].target;
  }
  std::vector<int32_t> index(n, -1), low(n, 0), comp(n, -1), stack, it(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int32_t> call;
  int32_t counter = 0, comps = 0;
  for (int32_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.push_back(root);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    it[root] = head[root];
    while (!call.empty()) {
      int32_t v = call.back();
      if (it[v] < head[v + 1]) {
        int32_t u = adj[it[v]++];
        if (index[u] < 0) {
          index[u] = low[u] = counter++;
          stack.push_back(u);
          on_stack[u] = true;
          it[u] = head[u];
          call.push_back(u);
        } else if (on_stack[u]) {
          low[v] = std::min(low[v], index[u]);
        }
        continue;
      }
      call.pop_back();
      if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
      if (low[v] == index[v]) {
        int32_t u;
        do {
          u = stack.back();
          stack.pop_back();
          on_stack[u] = false;
          comp[u] = comps;
        } while (u != v);
        ++comps;
      }
    }
  }
  return comp;
}

// Edges of a shortest path from `from` to `to` within `subset`.
std::vector<int64_t> PathWithin(const DualGraph& graph, const std::vector<int64_t>& subset, int32_t from,
                                int32_t to) {
  if (from == to) return {};
  const auto& edges = graph.edges();
  std::vector<std::vector<int64_t>> out(graph.vertex_count());
  for (int64_t e : subset) out[edges[e].source].push_back(e);
  std::vector<int64_t> via(graph.vertex_count(), -1);
  std::vector<bool> seen(graph.vertex_count(), false);
  std::deque<int32_t> queue{from};
  seen[from] = true;
  while (!queue.empty() && !seen[to]) {
    int32_t v = queue.front();
    queue.pop_front();
    for (int64_t e : out[v]) {
      int32_t u = edges[e].target;
      if (seen[u]) continue;
      seen[u] = true;
      via[u] = e;
      queue.push_back(u);
    }
  }
  std::vector<int64_t> path;
  for (int32_t v = to; v != from; v = edges[via[v]].source) path.push_back(via[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

// A cycle through some edge of `subset` accepted by `pick`, closed inside
// its strongly connected component.
template <typename Pick>
std::optional<std::vector<int64_t>> CycleThrough(const DualGraph& graph, const std::vector<int64_t>& subset,
                                                 Pick pick) {
  std::vector<int32_t> comp = Components(graph, subset);
  const auto& edges = graph.edges();
  for (int64_t e : subset) {
    if (!pick(edges[e]) || comp[edges[e].source] != comp[edges[e].target]) continue;
    std::vector<int64_t> cycle{e};
    for (int64_t p : PathWithin(graph, subset, edges[e].target, edges[e].source)) cycle.push_back(p);
    return cycle;
  }
  return std::nullopt;
}

// Outcome of Bellman-Ford from a virtual source: a negative cycle, or the
// edges (indices into the active list) tight under the final potentials.
struct Relaxation {
  std::optional<std::vector<int64_t>> cycle;
  std::vector<int64_t> tight;
};

template <typename Weight>
Relaxation NegativeCycle(const DualGraph& graph, const std::vector<int64_t>& active,
                         const std::vector<Weight>& cost) {
  const int32_t n = graph.vertex_count();
  const auto& edges = graph.edges();
  std::vector<Weight> dist(n, Weight(0));
  std::vector<int64_t> pred(n, -1);
  int32_t last = -1;
  Relaxation out;
  for (int32_t round = 0; round < n; ++round) {
    last = -1;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const DualEdge& e = edges[active[k]];
      Weight d = dist[e.source] + cost[k];
      if (d < dist[e.target]) {
        dist[e.target] = d;
        pred[e.target] = active[k];
        last = e.target;
      }
    }
    if (last < 0) {
      for (std::size_t k = 0; k < active.size(); ++k) {
        const DualEdge& e = edges[active[k]];
        if (dist[e.source] + cost[k] == dist[e.target]) out.tight.push_back(active[k]);
      }
      return out;
    }
  }
  int32_t v = last;
  for (int32_t i = 0; i < n; ++i) v = edges[pred[v]].source;
  std::vector<int64_t> cycle;
  int32_t u = v;
  do {
    cycle.push_back(pred[u]);
    u = edges[pred[u]].source;
  } while (u != v);
  std::reverse(cycle.begin(), cycle.end());
  out.cycle = std::move(cycle);
  return out;
}

// Shortest simple cycle with positive w through the lowest-numbered vertex
// admitting one, within `subset`; ties go to the smaller edge index.
std::optional<std::vector<int64_t>> CanonicalCycle(const DualGraph& graph, const std::vector<int64_t>& subset) {
  const auto& edges = graph.edges();
  const int32_t n = graph.vertex_count();
  std::vector<int32_t> comp = Components(graph, subset);
  // Components holding a positive-w edge; only their vertices can qualify.
  std::vector<bool> heavy(n, false);
  for (int64_t e : subset) {
    if (comp[edges[e].source] == comp[edges[e].target] && edges[e].w.value().Sign() > 0) {
      heavy[comp[edges[e].source]] = true;
    }
  }
  std::vector<std::vector<int64_t>> out(n);
  for (int64_t e : subset) {
    if (comp[edges[e].source] == comp[edges[e].target]) out[edges[e].source].push_back(e);
  }
  // BFS over (vertex, seen a positive-w edge) states.
  std::vector<int64_t> via(2 * static_cast<std::size_t>(n));
  std::vector<int32_t> from(2 * static_cast<std::size_t>(n));
  for (int32_t root = 0; root < n; ++root) {
    if (!heavy[comp[root]] || out[root].empty()) continue;
    std::fill(via.begin(), via.end(), -2);
    std::deque<int32_t> queue{2 * root};
    via[2 * root] = -1;
    const int32_t goal = 2 * root + 1;
    while (!queue.empty() && via[goal] == -2) {
      int32_t state = queue.front();
      queue.pop_front();
      for (int64_t e : out[state / 2]) {
        int32_t next = 2 * edges[e].target + ((state & 1) | (edges[e].w.value().Sign() > 0 ? 1 : 0));
        if (via[next] != -2) continue;
        via[next] = e;
        from[next] = state;
        queue.push_back(next);
      }
    }
    if (via[goal] == -2) continue;
    std::vector<int64_t> cycle;
    std::vector<bool> visited(n, false);
    bool simple = true;
    for (int32_t state = goal; state != 2 * root; state = from[state]) {
      int32_t src = edges[via[state]].source;
      if (visited[src]) simple = false;
      visited[src] = true;
      cycle.push_back(via[state]);
    }
    if (!simple) continue;
    std::reverse(cycle.begin(), cycle.end());
    return cycle;
  }
  return std::nullopt;
}

// Weights scaled to integers by the common denominator, when they fit.
struct Scaled {
  std::vector<int64_t> w, q;
  int64_t max_abs = 0;
};

std::optional<Scaled> ScaleWeights(const DualGraph& graph, const std::vector<int64_t>& active) {
  const auto& edges = graph.edges();
  Int lcm = 1;
  for (int64_t e : active) {
    for (const Rational& r : {edges[e].w.value(), edges[e].q.value()}) {
      lcm = lcm / std::gcd(static_cast<int64_t>(lcm), r.den()) * r.den();
      if (lcm > (Int{1} << 40)) return std::nullopt;
    }
  }
  Scaled s;
  for (int64_t e : active) {
    Int w = Int(edges[e].w.value().num()) * (lcm / edges[e].w.value().den());
    Int q = Int(edges[e].q.value().num()) * (lcm / edges[e].q.value().den());
    if (w > (Int{1} << 50) || q > (Int{1} << 50)) return std::nullopt;
    s.w.push_back(static_cast<int64_t>(w));
    s.q.push_back(static_cast<int64_t>(q));
    s.max_abs = std::max({s.max_abs, static_cast<int64_t>(w), static_cast<int64_t>(q)});
  }
  return s;
}

int BitWidth(Int v) {
  if (v < 0) v = -v;
  int b = 0;
  while (v > 0) {
    v >>= 1;
    ++b;
  }
  return b;
}

// A cycle with q - lambda * w > 0, i.e. ratio above lambda.
Relaxation ImprovingCycle(const DualGraph& graph, const std::vector<int64_t>& active,
                                                   const std::optional<Scaled>& scaled, const Rational& lambda) {
  if (scaled) {
    // Edge weight (num * w - den * q) stays exact in 128 bits when small enough.
    int bits = std::max(BitWidth(lambda.num()), BitWidth(lambda.den())) + BitWidth(scaled->max_abs) + 1 +
               BitWidth(graph.vertex_count()) + 1;
    if (bits < 126) {
      std::vector<Int> cost(active.size());
      for (std::size_t k = 0; k < active.size(); ++k) {
        cost[k] = Int(lambda.num()) * scaled->w[k] - Int(lambda.den()) * scaled->q[k];
      }
      return NegativeCycle(graph, active, cost);
    }
  }
  const auto& edges = graph.edges();
  std::vector<Rational> cost(active.size());
  for (std::size_t k = 0; k < active.size(); ++k) {
    const DualEdge& e = edges[active[k]];
    cost[k] = lambda * e.w.value() - e.q.value();
  }
  return NegativeCycle(graph, active, cost);
}

RatioVerdict Verdict(const DualGraph& graph, std::vector<int64_t> cycle, int iterations) {
  RatioVerdict v;
  v.best = MakeReport(graph, std::move(cycle));
  v.classification = v.best.ratio.IsInfinite() ? RatioVerdict::Classification::kInfinite
                                               : RatioVerdict::Classification::kFinite;
  v.iterations = iterations;
  return v;
}

}  // namespace

CycleRatio CycleRatio::Of(const ExtendedCost& q, const ExtendedCost& w) {
  if (q.IsPosInf()) return Infinite();
  if (w.IsPosInf()) return Finite(Rational(0));
  if (w.value().Sign() > 0) return Finite(q.value() / w.value());
  return q.value().IsZero() ? Unit() : Infinite();
}

std::string CycleRatio::ToString() const { return IsInfinite() ? "+inf" : value_.ToString(); }

std::string CycleRatio::ToDecimal(int digits) const { return IsInfinite() ? "+inf" : value_.ToDecimal(digits); }

std::strong_ordering operator<=>(const CycleRatio& a, const CycleRatio& b) {
  if (a.IsInfinite() || b.IsInfinite()) return a.IsInfinite() <=> b.IsInfinite();
  return a.value_ <=> b.value_;
}

CycleReport MakeReport(const DualGraph& graph, std::vector<int64_t> edges) {
  CycleReport report;
  report.q = ExtendedCost(0);
  report.w = ExtendedCost(0);
  for (int64_t e : edges) {
    const DualEdge& d = graph.edges()[e];
    report.vertices.push_back(d.source);
    report.q += d.q;
    report.w += d.w;
  }
  report.ratio = CycleRatio::Of(report.q, report.w);
  report.induced_input = InducedInput(graph, edges);
  report.edges = std::move(edges);
  return report;
}

RatioVerdict MaxRatioCycle(const DualGraph& graph, std::optional<CycleRatio> stop_at) {
  if (graph.vertex_count() == 0 || graph.edges().empty()) throw Error(ErrorCode::kEmptyGraph, "graph has no edges");
  std::vector<int64_t> active = ActiveEdges(graph);
  const auto& edges = graph.edges();

  // Stage 1: unbounded ratios.
  if (auto c = CycleThrough(graph, active, [](const DualEdge& e) { return e.q.IsPosInf(); })) {
    return Verdict(graph, std::move(*c), 0);
  }
  // The remaining q = +inf edges lie on no cycle.
  std::erase_if(active, [&](int64_t e) { return edges[e].q.IsPosInf(); });
  std::vector<int64_t> zero_w;
  for (int64_t e : active) {
    if (edges[e].w.value().IsZero()) zero_w.push_back(e);
  }
  if (auto c = CycleThrough(graph, zero_w, [](const DualEdge& e) { return e.q.value().Sign() > 0; })) {
    return Verdict(graph, std::move(*c), 0);
  }
  // Every w = 0 cycle now has q = 0 (ratio 1).
  std::optional<std::vector<int64_t>> unit_cycle = CycleThrough(graph, zero_w, [](const DualEdge&) { return true; });
  if (!unit_cycle && !CycleThrough(graph, active, [](const DualEdge&) { return true; })) {
    throw Error(ErrorCode::kEmptyGraph, "graph has no cycle");
  }
  if (unit_cycle && stop_at && CycleRatio::Unit() >= *stop_at) {
    RatioVerdict v = Verdict(graph, std::move(*unit_cycle), 0);
    v.stopped_early = true;
    return v;
  }

  // Stage 2: Lawler's parametric search over cycles with w > 0.
  const std::optional<Scaled> scaled = ScaleWeights(graph, active);
  Rational lambda(-1);
  std::optional<std::vector<int64_t>> best;
  int iterations = 0;
  std::vector<int64_t> tight;
  for (;;) {
    Relaxation relax = ImprovingCycle(graph, active, scaled, lambda);
    if (!relax.cycle) {
      tight = std::move(relax.tight);
      break;
    }
    ++iterations;
    CycleReport report = MakeReport(graph, *relax.cycle);
    if (report.ratio.kind() != CycleRatio::Kind::kFinite || report.ratio.value() <= lambda) {
      throw Error(ErrorCode::kInvalidArgument, "internal: Lawler step did not improve the ratio");
    }
    lambda = report.ratio.value();
    best = std::move(*relax.cycle);
    if (stop_at && report.ratio >= *stop_at) {
      RatioVerdict v = Verdict(graph, std::move(*best), iterations);
      v.stopped_early = true;
      return v;
    }
  }
  if (unit_cycle && (!best || lambda < Rational(1))) return Verdict(graph, std::move(*unit_cycle), iterations);
  // Every optimal cycle is tight under the final potentials; report a
  // canonical one so the witness does not depend on relaxation order.
  if (auto c = CanonicalCycle(graph, tight)) {
    CycleReport report = MakeReport(graph, *c);
    if (report.ratio.kind() == CycleRatio::Kind::kFinite && report.ratio.value() == lambda) best = std::move(*c);
  }
  return Verdict(graph, std::move(*best), iterations);
}

RatioVerdict BruteForceMaxRatio(const DualGraph& graph) {
  const int32_t n = graph.vertex_count();
  if (n > kBruteForceMaxVertices) {
    throw Error(ErrorCode::kGraphTooLarge, "brute force handles at most " + std::to_string(kBruteForceMaxVertices) +
                                               " vertices, graph has " + std::to_string(n));
  }
  if (n == 0) throw Error(ErrorCode::kEmptyGraph, "graph has no vertices");
  const std::vector<int64_t> active = ActiveEdges(graph);
  const auto& edges = graph.edges();
  std::vector<std::vector<int64_t>> out(n);
  for (int64_t e : active) out[edges[e].source].push_back(e);

  std::optional<CycleRatio> best_ratio;
  std::vector<int64_t> best_cycle;
  std::vector<int64_t> path;
  std::vector<bool> on_path(n, false);
  // Cycles are enumerated from their smallest vertex.
  auto dfs = [&](auto&& self, int32_t start, int32_t v, ExtendedCost q, ExtendedCost w) -> void {
    for (int64_t e : out[v]) {
      const DualEdge& d = edges[e];
      if (d.target < start) continue;
      ExtendedCost q2 = q + d.q, w2 = w + d.w;
      path.push_back(e);
      if (d.target == start) {
        CycleRatio r = CycleRatio::Of(q2, w2);
        if (!best_ratio || r > *best_ratio) {
          best_ratio = r;
          best_cycle = path;
        }
      } else if (!on_path[d.target]) {
        on_path[d.target] = true;
        self(self, start, d.target, q2, w2);
        on_path[d.target] = false;
      }
      path.pop_back();
    }
  };
  for (int32_t s = 0; s < n; ++s) {
    on_path[s] = true;
    dfs(dfs, s, s, ExtendedCost(0), ExtendedCost(0));
    on_path[s] = false;
  }
  if (!best_ratio) throw Error(ErrorCode::kEmptyGraph, "graph has no cycle");
  return Verdict(graph, std::move(best_cycle), 0);
}

std::string DumpVerdict(const DualGraph& graph, const RatioVerdict& verdict) {
  using nlohmann::ordered_json;
  const CycleReport& c = verdict.best;
  ordered_json doc;
  doc["classification"] = verdict.finite() ? "finite" : "infinite";
  doc["ratio"] = c.ratio.ToString();
  doc["ratio_decimal"] = c.ratio.ToDecimal(4);
  doc["q"] = c.q.ToString();
  doc["w"] = c.w.ToString();
  ordered_json vertices = ordered_json::array();
  for (int32_t v : c.vertices) vertices.push_back(graph.VertexLabel(v));
  doc["cycle"] = vertices;
  ordered_json adversary = ordered_json::array();
  for (int64_t e : c.edges) adversary.push_back(graph.outputs().token(graph.edges()[e].adv_output));
  doc["adversary_outputs"] = adversary;
  doc["induced_input"] = graph.inputs().Format(c.induced_input);
  if (verdict.stopped_early) doc["stopped_early"] = true;
  return doc.dump(2) + "\n";
}

RatioVerdict EvaluatePolicy(const LocalProblem& problem, const DeterministicPolicy& policy) {
  return MaxRatioCycle(BuildGraphDet(problem, policy));
}

RatioVerdict EvaluatePolicy(const LocalProblem& problem, const RandomizedPolicy& policy) {
  return MaxRatioCycle(BuildGraphRand(problem, policy));
}

}  // namespace tlsynth
