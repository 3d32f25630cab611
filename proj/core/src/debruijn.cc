#include "tlsynth/debruijn.h"

#include "json.hpp"
#include "tlsynth/error.h"
#include "tlsynth/policy_io.h"

namespace tlsynth {
namespace {

int64_t Pow(int64_t base, int exp) {
  int64_t p = 1;
  for (int i = 0; i < exp; ++i) p *= base;
  return p;
}

int64_t CodeOf(std::span<const Symbol> s, int base) {
  int64_t c = 0;
  for (Symbol v : s) c = c * base + v;
  return c;
}

void CheckCost(const ExtendedCost& c, std::span<const Symbol> xw, std::span<const Symbol> yw,
               const LocalProblem& problem) {
  if (c.IsNegInf() || (c.IsFinite() && c.value().Sign() < 0)) {
    throw Error(ErrorCode::kUnsupported,
                "cycle analysis needs non-negative costs; window x=" + problem.inputs().Format(xw) +
                    " y=" + problem.outputs().Format(yw) + " costs " + c.ToString());
  }
}

}  // namespace

DualGraph::DualGraph(Alphabet inputs, Alphabet outputs, int window_length, int r,
                     std::vector<DualEdge> edges)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), window_length_(window_length),
      r_(r), edges_(std::move(edges)) {
  vertex_count_ = static_cast<int32_t>(Pow(inputs_.size(), window_length_) * Pow(outputs_.size(), r_));
}

Sequence DualGraph::VertexWindow(int32_t v) const {
  return WindowCodec(inputs_.size(), window_length_).Decode(v / Pow(outputs_.size(), r_));
}

Sequence DualGraph::VertexAdversary(int32_t v) const {
  return WindowCodec(outputs_.size(), r_).Decode(v % Pow(outputs_.size(), r_));
}

std::string DualGraph::VertexLabel(int32_t v) const {
  return WindowKey(inputs_, VertexWindow(v)) + "|" + WindowKey(outputs_, VertexAdversary(v));
}

GraphTemplate::GraphTemplate(const LocalProblem& problem, int horizon)
    : problem_(problem), horizon_(horizon), r_(problem.r()) {
  if (horizon < 1) throw Error(ErrorCode::kInvalidArgument, "horizon must be at least 1");
  if (problem.aggregation() != Aggregation::kSum) {
    throw Error(ErrorCode::kUnsupported, std::string("UnsupportedAggregation: cycle analysis needs sum, got ") +
                                             AggregationName(problem.aggregation()));
  }
  if (problem.objective() != Objective::kMin) {
    throw Error(ErrorCode::kUnsupported, "cycle analysis needs a minimization objective");
  }
  const int nx = problem.inputs().size();
  const int ny = problem.outputs().size();
  y_pow_r_ = Pow(ny, r_);
  const int64_t x_win = Pow(nx, r_ + 1);
  const int64_t y_win = y_pow_r_ * ny;

  // Local costs over all concrete windows.
  std::vector<ExtendedCost> v(x_win * y_win);
  WindowCodec xc(nx, r_ + 1), yc(ny, r_ + 1);
  bool all_finite = true;
  for (int64_t cx = 0; cx < x_win; ++cx) {
    Sequence xw = xc.Decode(cx);
    for (int64_t cy = 0; cy < y_win; ++cy) {
      Sequence yw = yc.Decode(cy);
      ExtendedCost c = problem.LookupCost(xw, yw);
      CheckCost(c, xw, yw, problem);
      all_finite = all_finite && c.IsFinite();
      v[cx * y_win + cy] = c;
    }
  }

  // Try v = F(x, y_1..y_r) + G(y_0..y_r): F is the minimum over the oldest
  // output, and the remainder must not depend on x.
  if (r_ >= 1 && all_finite) {
    std::vector<ExtendedCost> f(x_win * y_pow_r_);
    std::vector<ExtendedCost> g(y_win);
    bool ok = true;
    for (int64_t cx = 0; cx < x_win && ok; ++cx) {
      for (int64_t tail = 0; tail < y_pow_r_; ++tail) {
        Rational best = v[cx * y_win + tail].value();
        for (int y0 = 1; y0 < ny; ++y0) best = Min(best, v[cx * y_win + y0 * y_pow_r_ + tail].value());
        f[cx * y_pow_r_ + tail] = best;
        for (int y0 = 0; y0 < ny; ++y0) {
          int64_t cy = y0 * y_pow_r_ + tail;
          Rational rest = v[cx * y_win + cy].value() - best;
          if (cx == 0) {
            g[cy] = rest;
          } else if (g[cy].value() != rest) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
    }
    if (ok) {
      decomposed_ = true;
      f_ = std::move(f);
      g_ = std::move(g);
    }
  }
  if (!decomposed_) f_ = std::move(v);

  window_length_ = decomposed_ ? horizon_ + r_ - 1 : horizon_ + r_;
  int64_t windows;
  try {
    windows = WindowCodec(nx, window_length_, kMaxGraphVertices).count();
  } catch (const Error&) {
    throw Error(ErrorCode::kGraphTooLarge, "dual graph window space " + std::to_string(nx) + "^" +
                                               std::to_string(window_length_) + " is too large");
  }
  if (windows * y_pow_r_ > kMaxGraphVertices) {
    throw Error(ErrorCode::kGraphTooLarge, "dual graph would have " + std::to_string(windows * y_pow_r_) +
                                               " vertices");
  }
  vertex_count_ = static_cast<int32_t>(windows * y_pow_r_);

  WindowCodec vc(nx, window_length_);
  const int full_length = window_length_ + 1;
  const int64_t edge_count = static_cast<int64_t>(vertex_count_) * nx * ny;
  skeleton_.reserve(edge_count);
  x_codes_.reserve(edge_count);
  out_windows_.reserve(edge_count * (r_ + 1));
  Sequence full(full_length);
  for (int64_t wc = 0; wc < windows; ++wc) {
    vc.Decode(wc, std::span<Symbol>(full).first(window_length_));
    for (int64_t adv = 0; adv < y_pow_r_; ++adv) {
      const int32_t source = static_cast<int32_t>(wc * y_pow_r_ + adv);
      for (Symbol x = 0; x < nx; ++x) {
        full[window_length_] = x;
        const int64_t next_window = vc.Successor(wc, x);
        std::span<const Symbol> xw = std::span<const Symbol>(full).last(r_ + 1);
        const int64_t x_code = CodeOf(xw, nx);
        for (Symbol b = 0; b < ny; ++b) {
          DualEdge e;
          e.source = source;
          e.target = static_cast<int32_t>(next_window * y_pow_r_ + (adv * ny) % y_pow_r_ + (r_ > 0 ? b : 0));
          e.input = x;
          e.adv_output = b;
          const int64_t y_code = adv * ny + b;
          e.w = decomposed_ ? f_[x_code * y_pow_r_ + y_code % y_pow_r_] + g_[y_code]
                            : f_[x_code * y_win + y_code];
          e.q = ExtendedCost(0);
          skeleton_.push_back(e);
          x_codes_.push_back(x_code);
          for (int j = 0; j <= r_; ++j) {
            out_windows_.push_back(CodeOf(std::span<const Symbol>(full).subspan(j, horizon_), nx));
          }
        }
      }
    }
  }
}

ExtendedCost GraphTemplate::EdgeCost(std::size_t e, std::span<const Symbol> outputs) const {
  const int ny = problem_.outputs().size();
  const int64_t y_code = CodeOf(outputs, ny);
  if (decomposed_) {
    // F sees the outputs of its own step (all but the newest), G the next step's.
    return f_[x_codes_[e] * y_pow_r_ + CodeOf(outputs.first(r_), ny)] + g_[y_code];
  }
  return f_[x_codes_[e] * y_pow_r_ * ny + y_code];
}

void GraphTemplate::CheckPolicy(int horizon, const Alphabet& inputs, const Alphabet& outputs) const {
  if (horizon != horizon_) {
    throw Error(ErrorCode::kInvalidArgument, "policy horizon " + std::to_string(horizon) +
                                                 " does not match graph horizon " + std::to_string(horizon_));
  }
  if (!(inputs == problem_.inputs()) || !(outputs == problem_.outputs())) {
    throw Error(ErrorCode::kValidation, "policy alphabets do not match the problem");
  }
}

DualGraph GraphTemplate::Build(const DeterministicPolicy& policy) const {
  CheckPolicy(policy.horizon(), policy.inputs(), policy.outputs());
  std::vector<DualEdge> edges = skeleton_;
  Sequence outs(r_ + 1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (int j = 0; j <= r_; ++j) outs[j] = policy.At(OutputWindow(e, j));
    edges[e].q = EdgeCost(e, outs);
  }
  return DualGraph(problem_.inputs(), problem_.outputs(), window_length_, r_, std::move(edges));
}

DualGraph GraphTemplate::Build(const RandomizedPolicy& policy) const {
  CheckPolicy(policy.horizon(), policy.inputs(), policy.outputs());
  if (problem_.outputs().size() != 2) {
    throw Error(ErrorCode::kUnsupported, "UnsupportedProblem: randomized analysis needs a binary output alphabet");
  }
  std::vector<DualEdge> edges = skeleton_;
  const int k = r_ + 1;
  std::vector<Rational> p(k);
  Sequence outs(k);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (int j = 0; j < k; ++j) p[j] = policy.At(OutputWindow(e, j));
    // Outputs at distinct steps use independent coins.
    ExtendedCost q(0);
    for (int64_t mask = 0; mask < (int64_t{1} << k); ++mask) {
      Rational weight(1);
      for (int j = 0; j < k; ++j) {
        outs[j] = (mask >> (k - 1 - j)) & 1;
        weight *= outs[j] ? p[j] : Rational(1) - p[j];
        if (weight.IsZero()) break;
      }
      if (weight.IsZero()) continue;
      q += EdgeCost(e, outs).ScaledBy(weight);
    }
    edges[e].q = q;
  }
  return DualGraph(problem_.inputs(), problem_.outputs(), window_length_, r_, std::move(edges));
}

DualGraph BuildGraphDet(const LocalProblem& problem, const DeterministicPolicy& policy) {
  return GraphTemplate(problem, policy.horizon()).Build(policy);
}

DualGraph BuildGraphRand(const LocalProblem& problem, const RandomizedPolicy& policy) {
  return GraphTemplate(problem, policy.horizon()).Build(policy);
}

Sequence InducedInput(const DualGraph& graph, std::span<const int64_t> cycle_edges) {
  if (cycle_edges.empty()) throw Error(ErrorCode::kNotAWalk, "empty walk");
  const auto& edges = graph.edges();
  Sequence out;
  for (std::size_t i = 0; i < cycle_edges.size(); ++i) {
    int64_t id = cycle_edges[i];
    if (id < 0 || id >= static_cast<int64_t>(edges.size())) {
      throw Error(ErrorCode::kNotAWalk, "edge index " + std::to_string(id) + " out of range");
    }
    const DualEdge& e = edges[id];
    const DualEdge& next = edges[cycle_edges[(i + 1) % cycle_edges.size()]];
    if (e.target != next.source) {
      throw Error(ErrorCode::kNotAWalk, "edge " + std::to_string(i) + " ends at " + graph.VertexLabel(e.target) +
                                            " but the next edge starts at " + graph.VertexLabel(next.source));
    }
    out.push_back(e.input);
  }
  return out;
}

std::string DumpGraph(const DualGraph& graph) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["window_length"] = graph.window_length();
  doc["r"] = graph.r();
  ordered_json vertices = ordered_json::array();
  for (int32_t v = 0; v < graph.vertex_count(); ++v) {
    vertices.push_back({{"id", v},
                        {"label", graph.VertexLabel(v)},
                        {"window", WindowKey(graph.inputs(), graph.VertexWindow(v))},
                        {"adversary", WindowKey(graph.outputs(), graph.VertexAdversary(v))}});
  }
  doc["vertices"] = vertices;
  ordered_json edges = ordered_json::array();
  for (const DualEdge& e : graph.edges()) {
    edges.push_back({{"source", e.source},
                     {"target", e.target},
                     {"input", graph.inputs().token(e.input)},
                     {"adversary_output", graph.outputs().token(e.adv_output)},
                     {"w", e.w.ToString()},
                     {"q", e.q.ToString()}});
  }
  doc["edges"] = edges;
  return doc.dump(2) + "\n";
}

}  // namespace tlsynth
