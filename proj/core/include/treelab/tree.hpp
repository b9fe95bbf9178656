#pragma once
// Labelled-tree primitives: validated construction, BFS distance between
// vertex sets, the layer-growth statistic beta, single edge-move
// perturbations, relabelling, and a plain text serialization.
//
// Vertices are labelled 1..n and n >= 2 everywhere. Trees are immutable:
// every operation returns a new tree.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace treelab {

// Undirected edge; normalized to (min, max) on construction.
using Edge = std::pair<int, int>;

class LabelledTree {
 public:
  LabelledTree() = default;

  int n() const noexcept { return n_; }

  // The n-1 edges, each normalized (u < v), sorted lexicographically.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  // Neighbours of v in increasing order.
  std::span<const int> neighbors(int v) const noexcept {
    return {adj_.data() + off_[v], adj_.data() + off_[v + 1]};
  }

  int degree(int v) const noexcept { return off_[v + 1] - off_[v]; }

  bool has_edge(int u, int v) const noexcept;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> adj_;  // concatenated sorted neighbour lists
  std::vector<int> off_;  // off_[v] .. off_[v+1] delimit neighbors(v); size n+2

  friend LabelledTree build_tree(int n, std::vector<Edge> edges);
};

// Single edge move: delete {i, j}, insert {i, k}.
struct Perturbation {
  int i = 0;
  int j = 0;
  int k = 0;
};

// A pair of non-empty vertex sets for set-to-set distance queries.
struct VertexSetPair {
  std::vector<int> a;
  std::vector<int> b;
};

// Exact value of the layer-growth statistic: max over vertices i and depths
// d >= 1 of |{v : dist(i, v) = d}| / d, kept as the achieving fraction.
// `num` is the layer size, `den` the depth; the fraction is not reduced.
struct BetaValue {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

// Validates and builds a tree on {1..n} from exactly n-1 edges.
// Throws std::invalid_argument with a "not-a-tree: ..." or
// "label out of range: ..." message on invalid input. n must be >= 2.
LabelledTree build_tree(int n, std::vector<Edge> edges);

// min over (a, b) in A x B of the path distance between a and b.
// Throws std::invalid_argument ("empty set" / "label out of range") on bad input.
int distance(const LabelledTree& t, const std::vector<int>& a, const std::vector<int>& b);
int distance(const LabelledTree& t, const VertexSetPair& sets);

// Exact beta via a full BFS from every vertex (quadratic; fine for n into the
// tens of thousands). Ties are resolved deterministically: scanning vertices
// in increasing label order and depths in increasing order, the value is
// replaced only on strict improvement.
BetaValue beta(const LabelledTree& t);

// Applies the edge move {i,j} -> {i,k}. Pure: returns the new tree.
// Throws std::invalid_argument with message starting with
//   "edge-absent"  if {i,j} is not an edge of t,
//   "edge-present" if {i,k} already is an edge of t,
//   "cycle"        if the replacement would not produce a tree
//                  (i.e. the path from j to k passes through i).
LabelledTree perturb(const LabelledTree& t, const Perturbation& p);

// True iff perturb(t, p) would succeed.
bool perturbation_valid(const LabelledTree& t, const Perturbation& p);

// Relabels by the permutation omega: vertex v becomes omega[v-1].
// Throws std::invalid_argument ("not a permutation") if omega is not a
// bijection on {1..n}.
LabelledTree relabel(const LabelledTree& t, const std::vector<int>& omega);

// Text format: first line n, then n-1 lines "u v". Readers accept any
// whitespace separation; writers emit one edge per line in sorted order.
std::string to_text(const LabelledTree& t);
LabelledTree tree_from_text(const std::string& text);
void write_tree(std::ostream& os, const LabelledTree& t);
LabelledTree read_tree(std::istream& is);

}  // namespace treelab
