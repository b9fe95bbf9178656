#pragma once
// Local pattern statistics. A pattern is a small tree H on {1..l} together
// with a 0/1 marking theta of its vertices: an occurrence of (H, theta) in a
// tree t is a pair (U, W) where t[U] is isomorphic to H, W corresponds to the
// theta=1 vertices under some isomorphism, and every vertex of U \ W keeps
// all of its t-neighbours inside U (only W may touch the rest of the tree).
//
// Also provides rooted canonical shape codes (AHU), degree statistics, and
// induced-path counts with an optional layer-growth filter.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treelab/tree.hpp"

namespace treelab {

// Canonical code of a rooted tree: "()" for a leaf, otherwise "(" followed by
// the children's codes in lexicographically sorted order, then ")".
using ShapeCode = std::string;

struct Pattern {
  int l = 0;                // vertices of H, labelled 1..l (l >= 1)
  std::vector<Edge> edges;  // l-1 edges; empty iff l == 1
  std::vector<int> theta;   // size l, entries 0/1; theta[i] marks vertex i+1
};

// One occurrence: the copy's vertex set and its marked subset.
struct OccurrencePair {
  std::vector<int> u;  // size l, sorted
  std::vector<int> w;  // subset of u, sorted
};

// Number of vertices of degree exactly d (d >= 1). d = 1 counts leaves.
std::int64_t degree_count(const LabelledTree& t, int d);

int max_degree(const LabelledTree& t);

// Canonical rooted shape code of t rooted at `root`.
ShapeCode canonical_code(const LabelledTree& t, int root);

// JSON round trip for patterns: {"l": 3, "edges": [[1,2],[2,3]], "theta": [1,0,1]}.
Pattern pattern_from_json(const std::string& json_text);
std::string pattern_to_json(const Pattern& p);

// Throws std::invalid_argument unless H is a tree on {1..l} and theta is a
// 0/1 vector of length l. (l == 1 with no edges is valid.)
void validate_pattern(const Pattern& p);

// Number of occurrences of (H, theta) in t. With degree_cap set, t is first
// restricted to the forest induced on vertices of degree <= degree_cap, and
// occurrences are counted in that forest (neighbour conditions included).
std::int64_t pattern_count(const LabelledTree& t, const Pattern& p,
                           std::optional<int> degree_cap = std::nullopt);

// The occurrences themselves, sorted; intended for small inputs and tests.
std::vector<OccurrencePair> pattern_occurrences(const LabelledTree& t, const Pattern& p,
                                                std::optional<int> degree_cap = std::nullopt);

// Number of ordered embeddings: injective maps {1..l} -> V(t) realizing an
// occurrence (vertex i carries marking theta[i-1]). Always equals
// pattern_count * pattern_aut. Test/diagnostic scale.
std::int64_t pattern_ordered_embeddings(const LabelledTree& t, const Pattern& p,
                                        std::optional<int> degree_cap = std::nullopt);

// Number of l-vertex induced paths, i.e. vertex pairs at distance l-1
// (l >= 2). With beta_filter = c, only paths entirely inside
// V_good = {i : |{v : dist(i,v) = d}| <= c * d for every d >= 1} count.
std::int64_t path_count(const LabelledTree& t, int l, std::optional<double> beta_filter = std::nullopt);

// Membership mask of V_good for the layer-growth filter; index by vertex
// label (entry [0] unused).
std::vector<char> beta_good_vertices(const LabelledTree& t, double c);

// Order of the marking-preserving automorphism group of (H, theta): vertex
// permutations of H preserving both adjacency and theta. Brute force over
// permutations; patterns are small by design.
std::int64_t pattern_aut(const Pattern& p);

// The all-ones path pattern on l vertices: pattern_count with it equals
// path_count(t, l).
Pattern path_pattern(int l);

}  // namespace treelab
