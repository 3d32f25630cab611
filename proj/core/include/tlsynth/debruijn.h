#ifndef TLSYNTH_DEBRUIJN_H_
#define TLSYNTH_DEBRUIJN_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tlsynth/alphabet.h"
#include "tlsynth/policy.h"
#include "tlsynth/problem.h"
#include "tlsynth/rational.h"
#include "tlsynth/window_code.h"

namespace tlsynth {

// Largest vertex set a dual graph may have.
inline constexpr int64_t kMaxGraphVertices = int64_t{1} << 22;

struct DualEdge {
  int32_t source = 0;
  int32_t target = 0;
  Symbol input = 0;       // the new input x consumed by the edge
  Symbol adv_output = 0;  // the adversary's new output b'
  ExtendedCost w;         // adversary cost
  ExtendedCost q;         // algorithm cost (expected, for randomized policies)
};

// Vertex v carries the last W inputs and the adversary's last r outputs,
// v = window_code * |Y|^r + adversary_code. Edges are grouped by source:
// those of v occupy [v * degree, (v + 1) * degree), ordered by input, then
// adversary output.
class DualGraph {
 public:
  DualGraph() = default;
  DualGraph(Alphabet inputs, Alphabet outputs, int window_length, int r, std::vector<DualEdge> edges);

  const Alphabet& inputs() const { return inputs_; }
  const Alphabet& outputs() const { return outputs_; }
  int window_length() const { return window_length_; }
  int r() const { return r_; }
  int32_t vertex_count() const { return vertex_count_; }
  int degree() const { return inputs_.size() * outputs_.size(); }
  const std::vector<DualEdge>& edges() const { return edges_; }
  std::vector<DualEdge>& mutable_edges() { return edges_; }
  std::span<const DualEdge> OutEdges(int32_t v) const {
    return std::span<const DualEdge>(edges_).subspan(static_cast<std::size_t>(v) * degree(), degree());
  }

  Sequence VertexWindow(int32_t v) const;
  Sequence VertexAdversary(int32_t v) const;
  // "0110|0" style label.
  std::string VertexLabel(int32_t v) const;

 private:
  Alphabet inputs_;
  Alphabet outputs_;
  int window_length_ = 0;
  int r_ = 0;
  int32_t vertex_count_ = 0;
  std::vector<DualEdge> edges_;
};

// Policy-independent part of G(problem, A) for a fixed horizon: structure,
// adversary costs and the algorithm-cost tables. Building the graph of a
// concrete policy only fills in q.
//
// When the local cost splits as v = F(x-window, y_{i-r+1..i}) + G(y_{i-r..i})
// with G independent of the inputs (file migration: serve + switch), the
// vertex keeps W = T + r - 1 inputs and each edge is charged F for its own
// step plus G for the next step; the shift cancels around every cycle.
// Otherwise W = T + r and the edge is charged v directly.
class GraphTemplate {
 public:
  // Throws Error(kUnsupported) unless aggregation is sum, objective is min
  // and every concrete local cost is finite-or-+inf and non-negative;
  // Error(kGraphTooLarge) past kMaxGraphVertices.
  GraphTemplate(const LocalProblem& problem, int horizon);

  int horizon() const { return horizon_; }
  int window_length() const { return window_length_; }
  bool decomposed() const { return decomposed_; }
  int32_t vertex_count() const { return vertex_count_; }
  const LocalProblem& problem() const { return problem_; }

  // Fills q from a policy whose alphabets and horizon match.
  DualGraph Build(const DeterministicPolicy& policy) const;
  // Exact expectation over independent per-step outputs; binary Y only.
  DualGraph Build(const RandomizedPolicy& policy) const;

  // q of edge e when the algorithm outputs `outputs[j]` at the j-th output
  // window of the edge (j = 0..r). Exposed for pruning and tests.
  ExtendedCost EdgeCost(std::size_t e, std::span<const Symbol> outputs) const;
  // Window code (length T) of the j-th output window of edge e.
  int64_t OutputWindow(std::size_t e, int j) const { return out_windows_[e * (r_ + 1) + j]; }
  int outputs_per_edge() const { return r_ + 1; }
  const std::vector<DualEdge>& skeleton() const { return skeleton_; }

 private:
  void CheckPolicy(int horizon, const Alphabet& inputs, const Alphabet& outputs) const;

  LocalProblem problem_;
  int horizon_;
  int r_;
  int window_length_ = 0;
  bool decomposed_ = false;
  int32_t vertex_count_ = 0;
  int64_t y_pow_r_ = 1;  // |Y|^r
  std::vector<DualEdge> skeleton_;  // q left at 0
  std::vector<int64_t> x_codes_;    // per edge: code of the r+1 inputs ending at x
  std::vector<int64_t> out_windows_;
  // decomposed: f_[x_code * |Y|^r + y code of r outputs], g_[y code of r+1]
  // otherwise: f_[x_code * |Y|^(r+1) + y code of r+1 outputs]
  std::vector<ExtendedCost> f_;
  std::vector<ExtendedCost> g_;
};

DualGraph BuildGraphDet(const LocalProblem& problem, const DeterministicPolicy& policy);
DualGraph BuildGraphRand(const LocalProblem& problem, const RandomizedPolicy& policy);

// Inputs consumed along a closed walk given as edge indices. Throws
// Error(kNotAWalk) if consecutive edges do not chain or the walk is open.
Sequence InducedInput(const DualGraph& graph, std::span<const int64_t> cycle_edges);

// Structured dump of vertices and edges with exact costs.
std::string DumpGraph(const DualGraph& graph);

}  // namespace tlsynth

#endif  // TLSYNTH_DEBRUIJN_H_
