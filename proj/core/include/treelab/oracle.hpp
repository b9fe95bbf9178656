#pragma once
// Ground-truth machinery for small n: exhaustive enumeration of labelled
// trees, exact distributions of tree parameters, brute-force automorphism
// counts, the exposure martingale of the two-stage sampler on the full
// attachment-vector grid, and a randomized checker for Lipschitz and
// additivity properties of tree parameters under edge-move perturbations.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "treelab/numeric.hpp"
#include "treelab/patterns.hpp"
#include "treelab/sampler.hpp"
#include "treelab/tree.hpp"

namespace treelab {

// A tree parameter with exact rational values.
struct ExactParameter {
  std::string name;
  std::function<BigRat(const LabelledTree&)> eval;
};

// Visits every labelled tree on {1..n} exactly once (Prüfer odometer order;
// n^{n-2} trees). Supported for 2 <= n <= 9.
void enumerate_trees(int n, const std::function<void(const LabelledTree&)>& visit);

// n^{n-2} as exact integer.
BigInt tree_count(int n);

// Exact distribution of a parameter over the uniform measure on trees of
// size n: sorted (value, multiplicity) pairs plus exact mean and variance.
struct ExactDistribution {
  int n = 0;
  std::string parameter;
  std::vector<std::pair<BigRat, BigInt>> pmf;  // sorted by value
  BigInt total = 0;                            // n^{n-2}
  BigRat mean = 0;
  BigRat variance = 0;

  // Multiplicity of an exact value (0 if absent).
  BigInt count_of(const BigRat& value) const;
};

ExactDistribution exact_statistics(int n, const ExactParameter& f);

// |Aut(T)| by brute force over all vertex permutations (adjacency preserved,
// no labels). Exact for n <= 8; n == 9 is allowed but prints a runtime
// warning to stderr (9! checks per call); larger n throws.
BigInt brute_aut(const LabelledTree& t);

// Exposure martingale of the two-stage sampler for a parameter F:
// F_hat(u) = average of F over the stage-II relabellings of the stage-I tree
// T(u), and Y_i = E[F_hat | first i coordinates of u]. Each level is averaged
// directly from the full F_hat table over the n^{n-1} attachment grid, so the
// martingale identity is genuinely re-verified rather than imposed.
// For parameters flagged invariant under relabelling, F_hat(u) = F(T(u))
// (supported for n <= 6); otherwise all n! relabellings are averaged (n <= 5).
struct MartingaleTrace {
  int n = 0;
  std::string parameter;
  std::vector<std::vector<BigRat>> levels;   // levels[i]: n^i prefix values Y_i
  std::vector<BigRat> increment_second_moments;  // E[(Y_i - Y_{i-1})^2], i = 1..n-1
  BigRat variance = 0;                       // Var[F_hat] over the grid
  bool martingale_ok = false;                // E[Y_i | prefix] == Y_{i-1} exactly
  bool telescope_ok = false;                 // sum of increments == variance exactly
};

MartingaleTrace doob_stage1_trace(int n, const ExactParameter& f, bool relabel_invariant);

// Randomized perturbation audit of a real-valued parameter:
//  * Lipschitz: |F(S T) - F(T)| <= alpha for random valid single edge moves;
//  * additivity: for pairs of moves with all four graphs trees and moved
//    endpoint pairs {j,k}, {b,c} at distance >= rho in T, the combined
//    effect equals the sum of individual effects exactly (1e-9 slack).
struct LipschitzReport {
  std::string parameter;
  int n = 0;
  long long trials = 0;                  // requested perturbation trials
  long long single_tested = 0;           // valid single moves audited
  long long lipschitz_violations = 0;
  double max_abs_delta = 0.0;            // largest |F(ST) - F(T)| seen
  long long pairs_tested = 0;            // qualifying pairs audited
  long long superposition_violations = 0;
  double max_superposition_error = 0.0;
  std::vector<std::string> examples;     // up to 5 violating instances
  bool ok() const { return lipschitz_violations == 0 && superposition_violations == 0; }
};

LipschitzReport check_lipschitz_superposable(const std::string& name,
                                             const std::function<double(const LabelledTree&)>& f,
                                             int n, long long trials, double alpha, double rho,
                                             SeedSpec seed);

// Canned exact parameters for enumeration comparisons.
ExactParameter exact_leaf_count();
ExactParameter exact_degree_count(int d);
ExactParameter exact_max_degree();
ExactParameter exact_path_count(int l);
ExactParameter exact_pattern_count(const Pattern& p);
ExactParameter exact_edge_indicator(int u, int v);  // deliberately non-Lipschitz example

}  // namespace treelab
