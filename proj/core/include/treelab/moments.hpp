#pragma once
// Closed-form moment formulas for statistics of uniform random labelled
// trees, evaluated exactly (GMP rationals) where feasible and in log space
// for large n. Every report is tagged with a formula identifier so
// downstream tables can cite which expression produced a number.
//
// The central counting tool: given a forest S = H_1 ⊔ ... ⊔ H_k spanning
// [n] and non-empty anchor sets B_i ⊆ V(H_i), the number of trees on [n]
// containing all edges of S whose vertices outside ∪B_i keep exactly their
// S-degrees equals b_1 ... b_k (b_1 + ... + b_k)^{k-2}.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treelab/automorphisms.hpp"
#include "treelab/numeric.hpp"
#include "treelab/patterns.hpp"

namespace treelab {

// Exact value plus floating-point views and the formula identifier.
struct MomentReport {
  std::string formula;     // identifier, e.g. "pattern-mean"
  BigRat exact = 0;        // exact value when exact_valid
  bool exact_valid = false;
  double value = 0.0;      // double view (may overflow to inf for huge n)
  double log_value = 0.0;  // natural log view, always finite for positive values
  std::string describe() const;
};

// ---------------------------------------------------------------------------
// Anchored forest counts
// ---------------------------------------------------------------------------

// One component: a tree on the vertex set `vertices` (edges in tree-local
// labels 1..|vertices|), with non-empty anchor subset given by positions
// (1-based, into `vertices`).
struct ForestComponent {
  std::vector<int> vertices;      // distinct labels from [n]
  std::vector<Edge> edges;        // tree on {1..vertices.size()} in local labels
  std::vector<int> anchors;      // positions into vertices, non-empty
};

// A forest spanning [n]: components' vertex sets partition {1..n}.
struct ForestSpec {
  int n = 0;
  std::vector<ForestComponent> components;
};

void validate_forest_spec(const ForestSpec& spec);

// Number of trees on [n] that contain every component's edges and give no
// extra neighbours to vertices outside the anchor sets:
// b_1 ... b_k (sum b)^{k-2}, exact (the k = 1 case evaluates to 1).
MomentReport forest_count_exact(const ForestSpec& spec);

// ---------------------------------------------------------------------------
// Pattern moments
// ---------------------------------------------------------------------------

// E[#occurrences of (H, theta)] over a uniform tree on [n]:
//   (n)_l / |Aut(H,theta)| * s (n - l + s)^{n-l-1} / n^{n-2},  s = sum theta.
// Requires n >= l and s >= 1 unless n > l (s = 0 with n > l returns exact 0
// with formula id "pattern-mean-empty"). The degenerate s = 0, n = l case is
// rejected. Exact for any n (cost grows with n); see the -log variant beyond.
MomentReport pattern_expectation_exact(int n, const Pattern& p);

// log of the same quantity in double precision, usable for n far beyond
// exact-arithmetic comfort. Requires a nonzero mean (s >= 1).
double pattern_expectation_log(std::int64_t n, const Pattern& p);

// E[#copies of the (unmarked) tree H as an induced subgraph | degree
// sequence]: x has length n, x_v = deg(v) - 1, sum x = n - 2. Exact:
//   (1/|Aut H|) sum over ordered l-tuples u of distinct vertices of
//   sum_i (x_{u_i})_{h_i} prod_{j != i} (x_{u_j})_{h_j - 1} / (n-2)_{l-1}.
// Cost O(n^l); intended for small instances and cross-checks.
MomentReport conditional_pattern_expectation(const std::vector<int>& x, const Pattern& p);

// ---------------------------------------------------------------------------
// Path count moments
// ---------------------------------------------------------------------------

// Leading term of Var[#induced l-vertex paths]: n l (l-1)^2 (l-2) / 24.
// Requires l >= 3.
MomentReport path_variance_leading(std::int64_t n, int l);

// The exact integer identity behind the leading term:
//   -l^2 (l-1)^2 + 2 sum_{i=2..l} (l-i+1)^2 (2l-i) == l (l-1)^2 (l-2) / 6.
// Returns both sides; they must agree for every l >= 2.
std::pair<BigRat, BigRat> path_variance_identity(int l);

// ---------------------------------------------------------------------------
// Degree-sequence (multinomial) moments
// ---------------------------------------------------------------------------

// For the degree-offset vector X (X_v = deg(v) - 1) of a uniform tree, which
// is multinomial(n-2, 1/n, ..., 1/n):
//   E[ prod_i (X_i)_{a_i} (X_i)_{b_i} ]
//     = sum over 0 <= j_i <= min(a_i, b_i) of
//       (n-2)_{A+B-J} / n^{A+B-J} * prod_i j_i! C(a_i,j_i) C(b_i,j_i).
// a and b may have any length <= n (missing entries are zero).
MomentReport multinomial_factorial_moment(int n, const std::vector<int>& a,
                                          const std::vector<int>& b);

// ---------------------------------------------------------------------------
// Branch moments
// ---------------------------------------------------------------------------

// E[(N_i(B))_k] for the number of branches with shape B at vertex i in a
// uniform tree rooted at r:
//   (n-2)_{bk} L(B)^k (n-bk)^{n-bk-2} / ((b!)^k n^{n-2})      for i != r,
//   (n-1)_{bk} in place of (n-2)_{bk}                          for i == r.
// Exact; requires bk < n. k = 0 gives 1.
MomentReport branch_factorial_moment(int n, const BranchShape& b, unsigned k, bool at_root);

// Same value in log space for large n (requires a positive value).
double branch_factorial_moment_log(std::int64_t n, const BranchShape& b, unsigned k, bool at_root);

// ---------------------------------------------------------------------------
// Poisson log-moment series and interval bounds
// ---------------------------------------------------------------------------

// Truncated-series values of E[log X!], E[log (X+1)!], E[log^2 X!] for
// X ~ Poisson(lambda), each with a rigorous tail bound below `tail_tol`.
struct PoissonLogMoments {
  double e_log_fact = 0.0;        // E[log X!]
  double e_log_fact_plus1 = 0.0;  // E[log (X+1)!]
  double e_log2_fact = 0.0;       // E[log^2 X!]
  double tail_bound = 0.0;        // bound on the truncation error of each value
  int terms = 0;                  // series terms used
};
PoissonLogMoments poisson_log_moments(double lambda, double tail_tol = 1e-15);

// The documented interval bounds for those moments at a given lambda < 0.37:
//   (a) 1/2 e^-l l^2 log2        <= E[log X!]     <= 1/2 (1+0.7l) e^-l l^2 log2
//   (b) e^-l l log2              <= E[log (X+1)!] <= (1+2.1l) e^-l l log2
//   (c) E[log^2 X!] >= e^-l l^2/2 log^2 2 + e^-l l^3/6 log^2 6
struct PoissonLogBounds {
  double a_lower = 0.0, a_upper = 0.0;
  double b_lower = 0.0, b_upper = 0.0;
  double c_lower = 0.0;
};
PoissonLogBounds poisson_log_bounds(double lambda);

// ---------------------------------------------------------------------------
// Series over rooted shapes
// ---------------------------------------------------------------------------

// Certified partial sums of S_j = sum over rooted unlabelled shapes B of
// lambda_B^2 e^{-lambda_B} |B|^j for j = 0, 1, 2, truncated at |B| <= s_max,
// with rigorous upper bounds for the discarded tail
// (sum_{s > s_max} s^{s+j-1} e^{-2s} / s! dominates it termwise).
// lambda_B is evaluated at finite n when given, else in the n -> oo limit.
struct LambdaSeriesReport {
  int s_max = 0;
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;             // partial sums
  double tail0 = 0.0, tail1 = 0.0, tail2 = 0.0;    // certified tail bounds
  std::vector<std::int64_t> shapes_per_size;       // index s-1 -> #shapes of size s
  std::string method;                              // how shapes were enumerated
};
LambdaSeriesReport lambda_series(int s_max, std::optional<std::int64_t> n = std::nullopt);

// Enumerates all rooted unlabelled shapes with exactly `size` vertices
// (canonical codes, sorted). Two independent methods; they agree:
//  * "labelled-aggregation": canonical codes of all labelled rooted trees
//    (feasible for size <= 9),
//  * "direct": recursive generation by canonical child multisets.
std::vector<ShapeCode> rooted_shapes_of_size(int size, const std::string& method = "direct");

}  // namespace treelab
