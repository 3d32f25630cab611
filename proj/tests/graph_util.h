#ifndef TLSYNTH_TESTS_GRAPH_UTIL_H_
#define TLSYNTH_TESTS_GRAPH_UTIL_H_

#include <string>
#include <vector>

#include "tlsynth/debruijn.h"

namespace tlsynth::testing {

// Free-form graph on n vertices dressed as a dual graph: inputs are the
// vertex names, W = 1, a single adversary output. Slot k of vertex v is the
// edge to k; slots left unset carry w = +inf and are ignored by the analysis.
class GraphBuilder {
 public:
  explicit GraphBuilder(int n) : n_(n), edges_(static_cast<std::size_t>(n) * n) {
    for (int v = 0; v < n; ++v) {
      for (int k = 0; k < n; ++k) {
        DualEdge& e = edges_[v * n + k];
        e.source = v;
        e.target = k;
        e.input = k;
        e.adv_output = 0;
        e.w = ExtendedCost::PosInf();
        e.q = ExtendedCost(0);
      }
    }
  }

  GraphBuilder& Edge(int from, int to, ExtendedCost q, ExtendedCost w) {
    DualEdge& e = edges_[from * n_ + to];
    e.q = q;
    e.w = w;
    return *this;
  }

  DualGraph Build() const {
    std::vector<std::string> names;
    for (int v = 0; v < n_; ++v) names.push_back("v" + std::to_string(v));
    return DualGraph(Alphabet(names), Alphabet({"z"}), 1, 0, edges_);
  }

 private:
  int n_;
  std::vector<DualEdge> edges_;
};

}  // namespace tlsynth::testing

#endif  // TLSYNTH_TESTS_GRAPH_UTIL_H_
