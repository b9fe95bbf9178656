#include "treelab/patterns.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "doctest.h"
#include "treelab/sampler.hpp"
#include "treelab/tree.hpp"

using namespace treelab;

namespace {

// 12-vertex tree with four degree-3 vertices (1, 2, 7, 8) and six leaves.
LabelledTree fixture12() {
  return build_tree(12, {{7, 2}, {8, 12}, {1, 2}, {2, 4}, {9, 7}, {7, 10}, {1, 5}, {5, 8},
                         {8, 11}, {1, 3}, {3, 6}});
}

LabelledTree path(int n) {
  std::vector<Edge> e;
  for (int v = 1; v < n; ++v) e.emplace_back(v, v + 1);
  return build_tree(n, e);
}

LabelledTree star(int n) {
  std::vector<Edge> e;
  for (int v = 2; v <= n; ++v) e.emplace_back(1, v);
  return build_tree(n, e);
}

Pattern p3_marked(int a, int b, int c) {
  Pattern p;
  p.l = 3;
  p.edges = {{1, 2}, {2, 3}};
  p.theta = {a, b, c};
  return p;
}

Pattern single_vertex(int mark) {
  Pattern p;
  p.l = 1;
  p.theta = {mark};
  return p;
}

Pattern single_edge(int a, int b) {
  Pattern p;
  p.l = 2;
  p.edges = {{1, 2}};
  p.theta = {a, b};
  return p;
}

}  // namespace

TEST_CASE("degree statistics") {
  const auto t = fixture12();
  CHECK(degree_count(t, 1) == 6);
  CHECK(degree_count(t, 2) == 2);
  CHECK(degree_count(t, 3) == 4);
  CHECK(degree_count(t, 4) == 0);
  CHECK(max_degree(t) == 3);
  CHECK(max_degree(star(9)) == 8);
  CHECK(max_degree(path(9)) == 2);
  CHECK_THROWS_AS(degree_count(t, 0), std::invalid_argument);
}

TEST_CASE("canonical rooted codes") {
  const auto p2 = path(2);
  CHECK(canonical_code(p2, 1) == "(())");
  const auto single_node_code = canonical_code(p2, 1);  // "(" leaf-code ")"

  // path on 3 rooted at an end vs star on 3 rooted at the centre
  const auto p3 = path(3);
  CHECK(canonical_code(p3, 1) == "((()))");
  CHECK(canonical_code(p3, 3) == "((()))");
  CHECK(canonical_code(p3, 2) == "(()())");

  // rooted-isomorphic trees get equal codes regardless of labels
  const auto a = build_tree(5, {{1, 2}, {1, 3}, {2, 4}, {2, 5}});
  const auto b = build_tree(5, {{5, 4}, {5, 3}, {4, 2}, {4, 1}});
  CHECK(canonical_code(a, 1) == canonical_code(b, 5));
  CHECK(canonical_code(a, 2) != canonical_code(a, 1));

  // branches hanging at vertices 3 and 4 of the 9-vertex example tree are
  // single edges, hence share one code
  const auto t9 = build_tree(9, {{1, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}, {2, 7}, {3, 8}, {4, 9}});
  const auto branch3 = build_tree(2, {{1, 2}});  // subtree below 3 is {3,8}
  const auto branch4 = build_tree(2, {{1, 2}});  // subtree below 4 is {4,9}
  CHECK(canonical_code(branch3, 1) == canonical_code(branch4, 1));
  CHECK(canonical_code(t9, 3) == canonical_code(t9, 4));  // whole tree from equivalent roots

  CHECK_THROWS_AS(canonical_code(p3, 4), std::invalid_argument);
  (void)single_node_code;
}

TEST_CASE("pattern json round trip and validation") {
  const std::string text = R"({"l": 3, "edges": [[1,2],[2,3]], "theta": [1,0,1]})";
  const Pattern p = pattern_from_json(text);
  CHECK(p.l == 3);
  CHECK(p.edges == std::vector<Edge>{{1, 2}, {2, 3}});
  CHECK(p.theta == std::vector<int>{1, 0, 1});
  const Pattern q = pattern_from_json(pattern_to_json(p));
  CHECK(q.l == p.l);
  CHECK(q.edges == p.edges);
  CHECK(q.theta == p.theta);

  CHECK_THROWS_AS(pattern_from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(pattern_from_json(R"({"l": 3, "edges": [[1,2]], "theta": [1,0,1]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(pattern_from_json(R"({"l": 3, "edges": [[1,2],[1,2]], "theta": [1,0,1]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(pattern_from_json(R"({"l": 3, "edges": [[1,2],[2,3]], "theta": [1,2,1]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(pattern_from_json(R"({"l": 3, "edges": [[1,2],[2,3]], "theta": [1,0]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(pattern_from_json(R"({"l": 3, "edges": [[1,2],[2,4]], "theta": [1,0,1]})"),
                  std::invalid_argument);
}

TEST_CASE("pattern counts on the 12-vertex example") {
  const auto t = fixture12();

  // marked ends, closed middle: only {1,3,6} and {1,5,8}
  CHECK(pattern_count(t, p3_marked(1, 0, 1)) == 2);
  const auto occ = pattern_occurrences(t, p3_marked(1, 0, 1));
  REQUIRE(occ.size() == 2);
  CHECK(occ[0].u == std::vector<int>{1, 3, 6});
  CHECK(occ[0].w == std::vector<int>{1, 6});
  CHECK(occ[1].u == std::vector<int>{1, 5, 8});
  CHECK(occ[1].w == std::vector<int>{1, 8});

  // one marked end: the unmarked end must be a leaf, so only {1,3,6} with W={1}
  CHECK(pattern_count(t, p3_marked(1, 0, 0)) == 1);
  CHECK(pattern_count(t, p3_marked(0, 0, 1)) == 1);
  const auto occ2 = pattern_occurrences(t, p3_marked(1, 0, 0));
  REQUIRE(occ2.size() == 1);
  CHECK(occ2[0].u == std::vector<int>{1, 3, 6});
  CHECK(occ2[0].w == std::vector<int>{1});

  // fully marked: every 3-vertex path counts
  CHECK(pattern_count(t, p3_marked(1, 1, 1)) == 14);

  // single edge, both ends marked: one occurrence per edge
  CHECK(pattern_count(t, single_edge(1, 1)) == 11);

  // single vertex
  CHECK(pattern_count(t, single_vertex(1)) == 12);
  CHECK(pattern_count(t, single_vertex(0)) == 0);
}

TEST_CASE("pattern counts with a degree cap") {
  const auto t = fixture12();
  // cap 2 keeps {3,4,5,6,9,10,11,12}; the only surviving edge is {3,6}
  CHECK(pattern_count(t, single_edge(1, 1), 2) == 1);
  CHECK(pattern_count(t, single_vertex(1), 2) == 8);
  CHECK(pattern_count(t, single_vertex(0), 2) == 6);  // isolated in the forest
  CHECK(pattern_count(t, single_edge(1, 0), 2) == 2);
  CHECK(pattern_count(t, p3_marked(1, 1, 1), 2) == 0);
  // cap >= max degree changes nothing
  CHECK(pattern_count(t, p3_marked(1, 1, 1), 3) == 14);
  CHECK(pattern_count(t, p3_marked(1, 0, 1), 3) == 2);
}

TEST_CASE("marked stars and paths") {
  const auto s = star(8);
  CHECK(pattern_count(s, p3_marked(1, 1, 1)) == 21);  // C(7,2)
  CHECK(pattern_count(s, p3_marked(1, 0, 1)) == 0);   // centre is never closed
  const auto p = path(8);
  CHECK(pattern_count(p, p3_marked(1, 1, 1)) == 6);
  CHECK(pattern_count(p, p3_marked(1, 0, 1)) == 6);
  CHECK(pattern_count(p, p3_marked(1, 0, 0)) == 2);  // leaf-anchored at each end
}

TEST_CASE("pattern automorphism counts") {
  CHECK(pattern_aut(p3_marked(1, 1, 1)) == 2);
  CHECK(pattern_aut(p3_marked(1, 0, 1)) == 2);
  CHECK(pattern_aut(p3_marked(1, 0, 0)) == 1);
  CHECK(pattern_aut(single_vertex(1)) == 1);
  CHECK(pattern_aut(single_edge(1, 1)) == 2);
  CHECK(pattern_aut(single_edge(1, 0)) == 1);

  Pattern star4;  // centre 1, marked leaves
  star4.l = 4;
  star4.edges = {{1, 2}, {1, 3}, {1, 4}};
  star4.theta = {0, 1, 1, 1};
  CHECK(pattern_aut(star4) == 6);

  Pattern path4 = path_pattern(4);
  CHECK(pattern_aut(path4) == 2);
}

TEST_CASE("ordered embeddings equal occurrences times pattern automorphisms") {
  RngStream rng({411, 0});
  std::vector<Pattern> pats = {p3_marked(1, 1, 1), p3_marked(1, 0, 1), p3_marked(1, 0, 0),
                               single_edge(1, 1), single_edge(1, 0), path_pattern(4),
                               single_vertex(0), single_vertex(1)};
  Pattern star4;
  star4.l = 4;
  star4.edges = {{1, 2}, {1, 3}, {1, 4}};
  star4.theta = {0, 1, 1, 1};
  pats.push_back(star4);

  for (int trial = 0; trial < 8; ++trial) {
    const int n = 6 + static_cast<int>(rng.uniform_below(15));
    const auto t = sample_uniform(n, rng);
    for (const auto& p : pats) {
      const auto cap = trial % 2 == 0 ? std::optional<int>{} : std::optional<int>{3};
      CHECK(pattern_ordered_embeddings(t, p, cap) == pattern_count(t, p, cap) * pattern_aut(p));
    }
  }
}

TEST_CASE("pattern counts are invariant under relabelling") {
  RngStream rng({412, 0});
  const std::vector<Pattern> pats = {p3_marked(1, 0, 1), p3_marked(1, 1, 1), single_edge(1, 0)};
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + static_cast<int>(rng.uniform_below(20));
    const auto t = sample_uniform(n, rng);
    const auto omega = sample_permutation(n, rng);
    const auto tw = relabel(t, omega);
    for (const auto& p : pats) {
      CHECK(pattern_count(t, p) == pattern_count(tw, p));
      CHECK(pattern_count(t, p, 3) == pattern_count(tw, p, 3));
    }
  }
}

TEST_CASE("path counts: closed forms and pattern agreement") {
  CHECK(path_count(star(10), 3) == 36);  // C(9,2)
  CHECK(path_count(path(10), 4) == 7);
  CHECK(path_count(path(10), 10) == 1);
  CHECK(path_count(path(10), 2) == 9);
  CHECK(path_count(fixture12(), 3) == 14);
  CHECK_THROWS_AS(path_count(path(5), 1), std::invalid_argument);

  RngStream rng({413, 0});
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 8 + static_cast<int>(rng.uniform_below(33));
    const auto t = sample_uniform(n, rng);
    for (int l = 2; l <= 6; ++l) {
      CHECK(path_count(t, l) == pattern_count(t, path_pattern(l)));
    }
    // a vacuous filter keeps every vertex
    CHECK(path_count(t, 4, static_cast<double>(n)) == path_count(t, 4));
  }
}

TEST_CASE("layer-growth filter membership") {
  const auto s = star(9);
  const auto good2 = beta_good_vertices(s, 2.0);
  for (int v = 1; v <= 9; ++v) CHECK(good2[v] == 0);  // centre blows up d=1, leaves d=2
  const auto good8 = beta_good_vertices(s, 8.0);
  for (int v = 1; v <= 9; ++v) CHECK(good8[v] == 1);

  const auto p = path(9);
  const auto pg = beta_good_vertices(p, 2.0);
  for (int v = 1; v <= 9; ++v) CHECK(pg[v] == 1);

  CHECK_THROWS_AS(beta_good_vertices(p, 0.0), std::invalid_argument);

  // filtered path count only uses edges within the good set
  const auto t = fixture12();
  const auto g = beta_good_vertices(t, 2.0);
  std::int64_t good_edges = 0;
  for (const auto& [u, v] : t.edges()) {
    if (g[u] && g[v]) ++good_edges;
  }
  CHECK(path_count(t, 2, 2.0) == good_edges);
}

TEST_CASE("one perturbation moves the filtered path count by a bounded amount") {
  RngStream rng({414, 0});
  const double c = 2.0;
  const int l = 4;
  const double bound = static_cast<double>(l * l * l) * c * c;
  int moves = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 10 + static_cast<int>(rng.uniform_below(51));
    const auto t = sample_uniform(n, rng);
    const auto base = path_count(t, l, c);
    for (int attempt = 0; attempt < 60 && moves < 120; ++attempt) {
      const auto& edge = t.edges()[rng.uniform_below(t.edges().size())];
      const bool flip = rng.uniform_below(2) == 1;
      const int i = flip ? edge.second : edge.first;
      const int j = flip ? edge.first : edge.second;
      const int k = 1 + static_cast<int>(rng.uniform_below(n));
      if (!perturbation_valid(t, {i, j, k})) continue;
      const auto s = perturb(t, {i, j, k});
      const auto delta = static_cast<double>(path_count(s, l, c) - base);
      CHECK(std::abs(delta) <= bound);
      ++moves;
    }
  }
  CHECK(moves >= 60);
}
