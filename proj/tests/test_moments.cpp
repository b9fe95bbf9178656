#include "treelab/moments.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "doctest.h"
#include "treelab/automorphisms.hpp"
#include "treelab/oracle.hpp"
#include "treelab/patterns.hpp"
#include "treelab/tree.hpp"

using namespace treelab;

namespace {

Pattern leaf_pattern() { return Pattern{2, {{1, 2}}, {1, 0}}; }
Pattern p3_marked_ends() { return Pattern{3, {{1, 2}, {2, 3}}, {1, 0, 1}}; }
Pattern p3_all() { return Pattern{3, {{1, 2}, {2, 3}}, {1, 1, 1}}; }
Pattern star4_all() { return Pattern{4, {{1, 2}, {1, 3}, {1, 4}}, {1, 1, 1, 1}}; }

// Brute-force count of trees matching an anchored forest spec: the tree must
// contain every component edge and give no extra neighbours to non-anchored
// vertices.
BigInt brute_forest_count(const ForestSpec& spec) {
  const int n = spec.n;
  std::vector<std::pair<int, int>> global_edges;
  std::vector<int> want_deg(n + 1, 0);  // required degree for non-anchored vertices
  std::vector<char> anchored(n + 1, 0);
  for (const ForestComponent& c : spec.components) {
    for (const Edge& e : c.edges) {
      int a = c.vertices[e.first - 1], b = c.vertices[e.second - 1];
      global_edges.emplace_back(a, b);
      ++want_deg[a];
      ++want_deg[b];
    }
    for (int pos : c.anchors) anchored[c.vertices[pos - 1]] = 1;
  }
  BigInt count = 0;
  enumerate_trees(n, [&](const LabelledTree& t) {
    for (auto [a, b] : global_edges)
      if (!t.has_edge(a, b)) return;
    for (int v = 1; v <= n; ++v)
      if (!anchored[v] && t.degree(v) != want_deg[v]) return;
    count += 1;
  });
  return count;
}

// Mean of pattern_count over all labelled trees on [n], as an exact rational.
BigRat brute_pattern_mean(int n, const Pattern& p) {
  BigInt sum = 0;
  enumerate_trees(n, [&](const LabelledTree& t) { sum += pattern_count(t, p); });
  BigRat r(sum);
  r /= tree_count(n);
  r.canonicalize();
  return r;
}

// Mean of pattern_count over trees with the given degree-offset sequence.
BigRat brute_conditional_mean(const std::vector<int>& x, const Pattern& p) {
  const int n = static_cast<int>(x.size());
  BigInt sum = 0, matching = 0;
  enumerate_trees(n, [&](const LabelledTree& t) {
    for (int v = 1; v <= n; ++v)
      if (t.degree(v) != x[v - 1] + 1) return;
    matching += 1;
    sum += pattern_count(t, p);
  });
  REQUIRE(matching > 0);
  BigRat r(sum);
  r /= matching;
  r.canonicalize();
  return r;
}

// E[prod_i (X_i)_{a_i} (X_i)_{b_i}] with X_v = deg(v) - 1, by enumeration.
BigRat brute_multinomial_moment(int n, const std::vector<int>& a, const std::vector<int>& b) {
  BigRat sum(0, 1);
  enumerate_trees(n, [&](const LabelledTree& t) {
    BigInt prod = 1;
    for (std::size_t i = 0; i < a.size() || i < b.size(); ++i) {
      const BigInt x(t.degree(static_cast<int>(i) + 1) - 1);
      const int ai = i < a.size() ? a[i] : 0;
      const int bi = i < b.size() ? b[i] : 0;
      prod *= falling_factorial_big(x, ai) * falling_factorial_big(x, bi);
    }
    sum += prod;
  });
  sum /= tree_count(n);
  sum.canonicalize();
  return sum;
}

// E[(N_i(B))_k] with respect to root r, by enumeration.
BigRat brute_branch_moment(int n, int root, int i, const ShapeCode& code, unsigned k) {
  BigRat sum(0, 1);
  enumerate_trees(n, [&](const LabelledTree& t) {
    const BigInt cnt(static_cast<long>(count_branches(t, root, i, code)));
    sum += falling_factorial_big(cnt, k);
  });
  sum /= tree_count(n);
  sum.canonicalize();
  return sum;
}

}  // namespace

TEST_CASE("anchored forest counts match the closed form and enumeration") {
  // Edge {1,2} with everything anchored: trees on [4] containing that edge.
  ForestSpec edge_full{4,
                       {{{1, 2}, {{1, 2}}, {1, 2}}, {{3}, {}, {1}}, {{4}, {}, {1}}}};
  MomentReport r = forest_count_exact(edge_full);
  CHECK(r.formula == "forest-count");
  CHECK(r.exact == BigRat(8));
  CHECK(r.value == doctest::Approx(8.0));
  CHECK(brute_forest_count(edge_full) == 8);

  // Same edge but vertex 2 not anchored: it must stay a leaf.
  ForestSpec edge_leaf{4, {{{1, 2}, {{1, 2}}, {1}}, {{3}, {}, {1}}, {{4}, {}, {1}}}};
  CHECK(forest_count_exact(edge_leaf).exact == BigRat(3));
  CHECK(brute_forest_count(edge_leaf) == 3);

  // Single component covering everything: exactly the one tree itself.
  ForestSpec whole{3, {{{1, 2, 3}, {{1, 2}, {2, 3}}, {1}}}};
  CHECK(forest_count_exact(whole).exact == BigRat(1));
  CHECK(brute_forest_count(whole) == 1);

  // A path of three vertices with both ends anchored, n = 5.
  ForestSpec path3{5, {{{1, 2, 3}, {{1, 2}, {2, 3}}, {1, 3}}, {{4}, {}, {1}}, {{5}, {}, {1}}}};
  CHECK(forest_count_exact(path3).exact == BigRat(8));
  CHECK(brute_forest_count(path3) == 8);

  // Larger mixed example at n = 6, checked purely against enumeration.
  ForestSpec mixed{6,
                   {{{2, 5, 6}, {{1, 2}, {1, 3}}, {2, 3}},  // star centred at 2, centre free
                    {{1, 4}, {{1, 2}}, {1, 2}},
                    {{3}, {}, {1}}}};
  CHECK(forest_count_exact(mixed).exact == BigRat(brute_forest_count(mixed)));

  // All-singletons spec: every tree qualifies.
  ForestSpec everything{4, {{{1}, {}, {1}}, {{2}, {}, {1}}, {{3}, {}, {1}}, {{4}, {}, {1}}}};
  CHECK(forest_count_exact(everything).exact == BigRat(16));

  CHECK(forest_count_exact(everything).describe().find("forest-count") == 0);
}

TEST_CASE("forest spec validation rejects malformed input") {
  CHECK_THROWS_AS(validate_forest_spec({0, {}}), std::invalid_argument);
  // Vertex 3 missing.
  CHECK_THROWS_AS(validate_forest_spec({3, {{{1, 2}, {{1, 2}}, {1}}}}), std::invalid_argument);
  // Vertex repeated across components.
  CHECK_THROWS_AS(
      validate_forest_spec({3, {{{1, 2}, {{1, 2}}, {1}}, {{2, 3}, {{1, 2}}, {1}}}}),
      std::invalid_argument);
  // Wrong edge count.
  CHECK_THROWS_AS(validate_forest_spec({2, {{{1, 2}, {}, {1}}}}), std::invalid_argument);
  // Disconnected component (duplicate edge).
  CHECK_THROWS_AS(validate_forest_spec({3, {{{1, 2, 3}, {{1, 2}, {1, 2}}, {1}}}}),
                  std::invalid_argument);
  // Empty anchors.
  CHECK_THROWS_AS(validate_forest_spec({2, {{{1, 2}, {{1, 2}}, {}}}}), std::invalid_argument);
  // Anchor position out of range.
  CHECK_THROWS_AS(validate_forest_spec({2, {{{1, 2}, {{1, 2}}, {3}}}}), std::invalid_argument);
}

TEST_CASE("pattern expectation: closed form equals enumeration") {
  // Leaves: marked end of an edge whose other end is closed.
  MomentReport leaves4 = pattern_expectation_exact(4, leaf_pattern());
  CHECK(leaves4.formula == "pattern-mean");
  CHECK(leaves4.exact == BigRat(9, 4));
  CHECK(exact_statistics(4, exact_leaf_count()).mean == BigRat(9, 4));

  for (int n : {4, 5, 6}) {
    CHECK(pattern_expectation_exact(n, leaf_pattern()).exact ==
          brute_pattern_mean(n, leaf_pattern()));
    CHECK(pattern_expectation_exact(n, p3_marked_ends()).exact ==
          brute_pattern_mean(n, p3_marked_ends()));
    CHECK(pattern_expectation_exact(n, p3_all()).exact == brute_pattern_mean(n, p3_all()));
  }
  for (int n : {5, 6}) {
    CHECK(pattern_expectation_exact(n, star4_all()).exact ==
          brute_pattern_mean(n, star4_all()));
  }

  // n equal to the pattern size: every 3-vertex tree is one fully-marked path.
  CHECK(pattern_expectation_exact(3, p3_all()).exact == BigRat(1));

  // Single marked vertex: every vertex matches.
  CHECK(pattern_expectation_exact(7, Pattern{1, {}, {1}}).exact == BigRat(7));
}

TEST_CASE("pattern expectation: domain handling") {
  Pattern unmarked{2, {{1, 2}}, {0, 0}};
  MomentReport empty = pattern_expectation_exact(5, unmarked);
  CHECK(empty.formula == "pattern-mean-empty");
  CHECK(empty.exact == BigRat(0));
  CHECK(std::isinf(empty.log_value));
  CHECK_THROWS_AS(pattern_expectation_exact(2, unmarked), std::invalid_argument);
  CHECK_THROWS_AS(pattern_expectation_exact(2, p3_all()), std::invalid_argument);
  CHECK_THROWS_AS(pattern_expectation_log(5, unmarked), std::invalid_argument);
}

TEST_CASE("pattern expectation: log variant tracks the exact one and scales") {
  for (int n : {10, 50, 500}) {
    const MomentReport exact = pattern_expectation_exact(n, leaf_pattern());
    CHECK(pattern_expectation_log(n, leaf_pattern()) ==
          doctest::Approx(exact.log_value).epsilon(1e-9));
  }
  // Expected leaf count of a big uniform tree is close to n / e.
  const double lg = pattern_expectation_log(1000000, leaf_pattern());
  CHECK(std::exp(lg) == doctest::Approx(1000000.0 / std::exp(1.0)).epsilon(1e-4));
}

TEST_CASE("conditional pattern expectation") {
  // Edges: conditional mean is n - 1 regardless of the degree sequence.
  Pattern edge{2, {{1, 2}}, {1, 1}};
  CHECK(conditional_pattern_expectation({2, 1, 1, 0, 0, 0}, edge).exact == BigRat(5));
  CHECK(conditional_pattern_expectation({0, 1, 1, 0}, edge).exact == BigRat(3));

  // Pinned example: degree offsets (0,1,1,0) force a 4-path, which has two
  // induced 3-paths.
  MomentReport cond = conditional_pattern_expectation({0, 1, 1, 0}, p3_all());
  CHECK(cond.formula == "pattern-mean-conditional");
  CHECK(cond.exact == BigRat(2));

  // Degree offsets (1,1,1,0,0) force a 5-path: three induced 3-paths.
  CHECK(conditional_pattern_expectation({1, 1, 1, 0, 0}, p3_all()).exact == BigRat(3));
  // A star on five vertices has C(4,2) = 6 induced 3-paths and C(4,3) = 4 claws.
  CHECK(conditional_pattern_expectation({3, 0, 0, 0, 0}, p3_all()).exact == BigRat(6));
  CHECK(conditional_pattern_expectation({3, 0, 0, 0, 0}, star4_all()).exact == BigRat(4));

  // Mixed degree sequences against enumeration.
  for (const std::vector<int>& x :
       {std::vector<int>{2, 1, 0, 0, 0}, {1, 0, 2, 0, 0}, {1, 1, 0, 2, 0, 0}}) {
    CHECK(conditional_pattern_expectation(x, p3_all()).exact ==
          brute_conditional_mean(x, p3_all()));
  }
  CHECK(conditional_pattern_expectation({2, 1, 1, 0, 0, 0}, star4_all()).exact ==
        brute_conditional_mean({2, 1, 1, 0, 0, 0}, star4_all()));
}

TEST_CASE("conditional pattern expectation: validation") {
  CHECK_THROWS_AS(conditional_pattern_expectation({1, 0, 0}, p3_all()),
                  std::invalid_argument);  // sums to 1 != n - 2
  CHECK_THROWS_AS(conditional_pattern_expectation({2, -1, 1, 0}, p3_all()),
                  std::invalid_argument);
  CHECK_THROWS_AS(conditional_pattern_expectation({1, 0, 0}, star4_all()),
                  std::invalid_argument);  // l > n - 1
}

TEST_CASE("path variance leading term and the integer identity behind it") {
  CHECK(path_variance_leading(2000, 3).exact == BigRat(1000));
  CHECK(path_variance_leading(24, 4).exact == BigRat(72));
  CHECK(path_variance_leading(7, 5).formula == "path-variance-leading");
  CHECK_THROWS_AS(path_variance_leading(10, 2), std::invalid_argument);

  for (int l = 2; l <= 50; ++l) {
    const auto [lhs, rhs] = path_variance_identity(l);
    CHECK(lhs == rhs);
  }
  CHECK(path_variance_identity(3).first == BigRat(2));
  CHECK(path_variance_identity(2).first == BigRat(0));
  // Leading term = n/4 * identity value (both sides scaled by 1/4 per vertex).
  const auto [lhs5, rhs5] = path_variance_identity(5);
  BigRat scaled = lhs5;
  scaled *= BigRat(100, 4);
  CHECK(path_variance_leading(100, 5).exact == scaled);
}

TEST_CASE("degree multinomial factorial moments match enumeration") {
  using V = std::vector<int>;
  const std::vector<std::pair<V, V>> cases = {
      {{1}, {1}}, {{2}, {1}}, {{1, 1}, {0, 1}}, {{2, 1}, {1, 1}}, {{0, 2}, {}}, {{1, 1, 1}, {}}};
  for (int n : {4, 5}) {
    for (const auto& [a, b] : cases) {
      CHECK(multinomial_factorial_moment(n, a, b).exact == brute_multinomial_moment(n, a, b));
    }
  }
  // Pure falling moments have a one-term closed form (n-2)_A / n^A.
  for (int a1 = 0; a1 <= 3; ++a1) {
    BigRat expect(falling_factorial_big(BigInt(4), a1));
    expect /= pow_big(BigInt(6), a1);
    expect.canonicalize();
    CHECK(multinomial_factorial_moment(6, std::vector<int>{a1}, {}).exact == expect);
  }
  // The moment only depends on the multiset of exponent pairs.
  CHECK(multinomial_factorial_moment(6, {2, 1}, {1, 0}).exact ==
        multinomial_factorial_moment(6, {1, 2}, {0, 1}).exact);
  CHECK(multinomial_factorial_moment(5, {1}, {1}).formula == "degree-multinomial-moment");
  CHECK_THROWS_AS(multinomial_factorial_moment(2, {1, 1, 1}, {}), std::invalid_argument);
  CHECK_THROWS_AS(multinomial_factorial_moment(5, {-1}, {}), std::invalid_argument);
}

TEST_CASE("branch factorial moments: pinned values and enumeration") {
  const BranchShape leaf = branch_shape_singleton();
  const BranchShape stem = branch_shape_rooted_edge();

  MomentReport away = branch_factorial_moment(4, leaf, 1, false);
  CHECK(away.formula == "branch-moment");
  CHECK(away.exact == BigRat(3, 8));
  MomentReport root = branch_factorial_moment(4, leaf, 1, true);
  CHECK(root.formula == "branch-moment-root");
  CHECK(root.exact == BigRat(9, 16));

  CHECK(branch_factorial_moment(5, leaf, 1, false).exact == brute_branch_moment(5, 1, 2, "()", 1));
  CHECK(branch_factorial_moment(5, leaf, 2, false).exact == brute_branch_moment(5, 1, 3, "()", 2));
  CHECK(branch_factorial_moment(5, leaf, 1, true).exact == brute_branch_moment(5, 1, 1, "()", 1));
  CHECK(branch_factorial_moment(5, leaf, 2, true).exact == brute_branch_moment(5, 1, 1, "()", 2));
  CHECK(branch_factorial_moment(6, stem, 1, false).exact ==
        brute_branch_moment(6, 1, 2, "(())", 1));
  CHECK(branch_factorial_moment(6, stem, 1, true).exact == brute_branch_moment(6, 1, 1, "(())", 1));

  const BranchShape path3 = branch_shape_from_code("((()))");
  CHECK(branch_factorial_moment(7, path3, 1, false).exact ==
        brute_branch_moment(7, 2, 5, "((()))", 1));

  CHECK(branch_factorial_moment(10, leaf, 0, true).exact == BigRat(1));
  CHECK_THROWS_AS(branch_factorial_moment(6, stem, 3, false), std::invalid_argument);
}

TEST_CASE("branch factorial moments: log variant") {
  const BranchShape leaf = branch_shape_singleton();
  const BranchShape stem = branch_shape_rooted_edge();
  for (unsigned k : {1u, 2u, 3u}) {
    const double lg = branch_factorial_moment_log(300, stem, k, false);
    CHECK(lg == doctest::Approx(branch_factorial_moment(300, stem, k, false).log_value)
                    .epsilon(1e-9));
  }
  CHECK(branch_factorial_moment_log(50, leaf, 2, true) ==
        doctest::Approx(branch_factorial_moment(50, leaf, 2, true).log_value).epsilon(1e-9));
  CHECK(branch_factorial_moment_log(100, leaf, 0, false) == 0.0);
  // E[(N)_k] with bk = n - 1 away from the root involves (n-2)_{n-1} = 0.
  CHECK_THROWS_AS(branch_factorial_moment_log(5, stem, 2, false), std::invalid_argument);
}

TEST_CASE("poisson log-moment series with certified tails") {
  const PoissonLogMoments m = poisson_log_moments(0.3);
  CHECK(m.tail_bound < 1e-15);
  CHECK(m.terms >= 5);
  // Hand-summed series values at lambda = 0.3.
  CHECK(m.e_log_fact == doctest::Approx(0.02995212).epsilon(1e-5));
  CHECK(m.e_log_fact_plus1 == doctest::Approx(0.22567745).epsilon(1e-5));
  CHECK(m.e_log2_fact == doctest::Approx(0.02962329).epsilon(1e-5));

  // A coarse tolerance must still bracket the precise value by its tail bound.
  const PoissonLogMoments coarse = poisson_log_moments(0.3, 1e-6);
  CHECK(std::abs(coarse.e_log_fact - m.e_log_fact) <= coarse.tail_bound);
  CHECK(std::abs(coarse.e_log_fact_plus1 - m.e_log_fact_plus1) <= coarse.tail_bound);
  CHECK(std::abs(coarse.e_log2_fact - m.e_log2_fact) <= coarse.tail_bound);

  const PoissonLogMoments zero = poisson_log_moments(0.0);
  CHECK(zero.e_log_fact == 0.0);
  CHECK(zero.e_log_fact_plus1 == 0.0);
  CHECK(zero.e_log2_fact == 0.0);

  // Larger lambda still converges.
  const PoissonLogMoments big = poisson_log_moments(5.0);
  CHECK(big.tail_bound < 1e-15);
  CHECK(big.e_log_fact > 0.0);

  CHECK_THROWS_AS(poisson_log_moments(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(poisson_log_moments(0.3, 0.0), std::invalid_argument);
}

TEST_CASE("poisson interval bounds at lambda = 0.3") {
  const PoissonLogBounds b = poisson_log_bounds(0.3);
  CHECK(b.a_lower == doctest::Approx(0.0231073).epsilon(1e-5));
  CHECK(b.a_upper == doctest::Approx(0.0279598).epsilon(1e-5));
  CHECK(b.b_lower == doctest::Approx(0.1540488).epsilon(1e-5));
  CHECK(b.b_upper == doctest::Approx(0.2510996).epsilon(1e-5));
  CHECK(b.c_lower == doctest::Approx(0.0267192).epsilon(1e-5));

  const PoissonLogMoments m = poisson_log_moments(0.3);
  CHECK(b.a_lower <= m.e_log_fact);
  // The stated upper endpoint of (a) actually falls below the true mean here;
  // the acceptance gate reports this inequality as failed. Assert the fact so
  // a change in either routine is noticed.
  CHECK(m.e_log_fact > b.a_upper);
  CHECK(b.b_lower <= m.e_log_fact_plus1);
  CHECK(m.e_log_fact_plus1 <= b.b_upper);
  CHECK(b.c_lower <= m.e_log2_fact);

  CHECK_THROWS_AS(poisson_log_bounds(0.0), std::invalid_argument);
  CHECK_THROWS_AS(poisson_log_bounds(0.37), std::invalid_argument);
}

TEST_CASE("rooted shape enumeration: counts and method agreement") {
  const std::vector<std::int64_t> counts = {1, 1, 2, 4, 9, 20, 48, 115, 286, 719, 1842, 4766};
  for (int s = 1; s <= 12; ++s) {
    CHECK(static_cast<std::int64_t>(rooted_shapes_of_size(s, "direct").size()) == counts[s - 1]);
  }
  for (int s = 1; s <= 7; ++s) {
    CHECK(rooted_shapes_of_size(s, "direct") == rooted_shapes_of_size(s, "labelled-aggregation"));
  }
  // Labelled rootings of all shapes of size s total s^{s-1}.
  for (int s = 1; s <= 8; ++s) {
    BigInt sum = 0;
    for (const ShapeCode& c : rooted_shapes_of_size(s)) sum += branch_shape_from_code(c).labellings;
    CHECK(sum == pow_big(BigInt(s), s - 1));
  }
  CHECK_THROWS_AS(rooted_shapes_of_size(0), std::invalid_argument);
  CHECK_THROWS_AS(rooted_shapes_of_size(10, "labelled-aggregation"), std::invalid_argument);
  CHECK_THROWS_AS(rooted_shapes_of_size(3, "guess"), std::invalid_argument);
}

TEST_CASE("lambda series partial sums with certified tails") {
  // Single shape: the lone vertex with intensity 1/e in the large-n limit.
  const LambdaSeriesReport one = lambda_series(1);
  const double lam1 = std::exp(-1.0);
  CHECK(one.s0 == doctest::Approx(lam1 * lam1 * std::exp(-lam1)).epsilon(1e-12));
  CHECK(one.s0 == doctest::Approx(0.09367902).epsilon(1e-6));
  CHECK(one.shapes_per_size == std::vector<std::int64_t>{1});

  const LambdaSeriesReport rep = lambda_series(12);
  CHECK(rep.method == "direct");
  CHECK(rep.shapes_per_size ==
        std::vector<std::int64_t>{1, 1, 2, 4, 9, 20, 48, 115, 286, 719, 1842, 4766});
  CHECK(rep.s0 == doctest::Approx(0.1136).epsilon(0.02));
  CHECK(rep.tail0 < 1e-6);
  CHECK(rep.tail1 < 1e-5);
  CHECK(rep.tail2 < 1e-4);

  // The three series bounds used downstream hold with certified truncation.
  CHECK(rep.s0 > 0.1);
  CHECK(rep.s1 + rep.tail1 < 0.2);
  CHECK(rep.s2 + rep.tail2 < 0.3);

  // Partial sums grow and tails shrink with s_max.
  const LambdaSeriesReport small = lambda_series(6);
  CHECK(small.s0 < rep.s0);
  CHECK(small.s1 < rep.s1);
  CHECK(small.tail0 > rep.tail0);
  CHECK(small.s0 + small.tail0 >= rep.s0);

  // Finite-n intensities: slightly larger lambdas, same qualitative bounds.
  const LambdaSeriesReport fin = lambda_series(10, std::optional<std::int64_t>(1000000));
  CHECK(fin.s0 > 0.1);
  CHECK(fin.s1 + fin.tail1 < 0.2);
  CHECK(fin.s2 + fin.tail2 < 0.3);
  CHECK(fin.s0 == doctest::Approx(rep.s0).epsilon(0.01));

  CHECK_THROWS_AS(lambda_series(0), std::invalid_argument);
  CHECK_THROWS_AS(lambda_series(10, std::optional<std::int64_t>(5)), std::invalid_argument);
}

TEST_CASE("moment reports describe themselves") {
  const MomentReport r = pattern_expectation_exact(4, leaf_pattern());
  const std::string d = r.describe();
  CHECK(d.find("pattern-mean") == 0);
  CHECK(d.find("9/4") != std::string::npos);
  CHECK(d.find("2.25") != std::string::npos);
}
