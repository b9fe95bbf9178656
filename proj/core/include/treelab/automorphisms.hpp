#pragma once
// Automorphism statistics through branch decompositions.
//
// Root a tree at r. The branches at a vertex i are the fringe subtrees
// hanging from the children of i; N_i(B) denotes how many branches at i have
// rooted shape B. The rooted automorphism count factorizes exactly as
//     |Aut_r(T)| = prod over i prod over shapes B of N_i(B)! ,
// and the unrooted count follows by rooting at the tree's centre (with a
// factor 2 when the two halves of a bicentral tree are isomorphic). The
// truncated variant restricts the product to branches of bounded size.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treelab/numeric.hpp"
#include "treelab/patterns.hpp"
#include "treelab/tree.hpp"

namespace treelab {

// A rooted branch shape: canonical code, number of vertices, and the number
// of distinct labelled rooted trees of this shape on a fixed label set,
// L(B) = |B|! / |Aut_rooted(B)|.
struct BranchShape {
  ShapeCode code;
  int size = 0;
  BigInt labellings = 0;
};

// Branch decomposition of a tree rooted at `root`: for every vertex i, the
// multiset of branch shapes at i as (shape index, multiplicity) pairs into
// the interned `shapes` vector.
struct BranchTable {
  int root = 0;
  std::vector<BranchShape> shapes;
  std::vector<std::vector<std::pair<int, int>>> at;  // at[i]; index 0 unused
};

BranchTable branch_table(const LabelledTree& t, int root);

// log |Aut_r(T)| via the product formula, as a sum of log-factorials of
// branch multiplicities (exact factorial tables below a fixed cutoff).
double log_aut_rooted(const LabelledTree& t, int root);

// Exact integer |Aut_r(T)|.
BigInt aut_rooted_exact(const LabelledTree& t, int root);

// Truncated variant: the product keeps only branch shapes B with
// |B| <= threshold (threshold >= 1).
double log_aut_small(const LabelledTree& t, int root, int threshold);
BigInt aut_small_exact(const LabelledTree& t, int root, int threshold);

// log |Aut(T)| of the unrooted tree via centre rooting. Satisfies
// log_aut_rooted(t, r) <= log_aut_full(t) <= log_aut_rooted(t, r) + log n
// for every root r.
double log_aut_full(const LabelledTree& t);
BigInt aut_full_exact(const LabelledTree& t);

// Centre vertices (1 or 2), ascending.
std::vector<int> tree_centers(const LabelledTree& t);

// Branch intensity lambda_B = L(B) / (e^{|B|} |B|!) * exp(|B| / (2n)); pass
// std::nullopt for the n -> infinity value L(B) / (e^{|B|} |B|!).
double lambda_branch(const BranchShape& b, std::optional<std::int64_t> n);

// Builds a BranchShape (size and labellings included) from a canonical code.
BranchShape branch_shape_from_code(const ShapeCode& code);

// Common cases: the single vertex, and the rooted edge (root with one child).
BranchShape branch_shape_singleton();
BranchShape branch_shape_rooted_edge();

// |Aut_rooted| of a shape given by its canonical code.
BigInt aut_rooted_of_code(const ShapeCode& code);

// Number of branches at vertex i (with respect to root r) whose fringe
// subtree has the given canonical shape code. O(n) per call.
std::int64_t count_branches(const LabelledTree& t, int root, int i, const ShapeCode& code);

}  // namespace treelab
