#include "treelab/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace treelab {

namespace {

using nlohmann::json;

// Adjacency restricted to vertices of degree <= cap (degrees measured in the
// full tree). Without a cap every vertex is kept. Lists stay sorted.
struct MaskedForest {
  std::vector<char> mask;             // [0..n]; mask[v] == 1 iff v is kept
  std::vector<std::vector<int>> adj;  // [0..n]; neighbours within the mask
};

MaskedForest masked_forest(const LabelledTree& t, std::optional<int> cap) {
  const int n = t.n();
  MaskedForest f;
  f.mask.assign(n + 1, 1);
  f.mask[0] = 0;
  if (cap) {
    for (int v = 1; v <= n; ++v) f.mask[v] = t.degree(v) <= *cap ? 1 : 0;
  }
  f.adj.assign(n + 1, {});
  for (int v = 1; v <= n; ++v) {
    if (!f.mask[v]) continue;
    for (int u : t.neighbors(v)) {
      if (f.mask[u]) f.adj[v].push_back(u);
    }
  }
  return f;
}

// Enumerate every connected l-subset of the masked forest exactly once
// (each subset is generated from its minimum vertex, extensions restricted to
// larger labels outside the current closed neighbourhood). The visitor
// receives the subset sorted ascending.
void enumerate_connected_subsets(const MaskedForest& f, int n, int l,
                                 const std::function<void(const std::vector<int>&)>& visit) {
  if (l <= 0) return;
  std::vector<char> closure(n + 1, 0);  // in the subset or adjacent to it
  std::vector<int> sub;
  sub.reserve(l);
  std::vector<int> sorted_buf;

  std::function<void(std::vector<int>&, int)> extend = [&](std::vector<int>& ext, int root) {
    if (static_cast<int>(sub.size()) == l) {
      sorted_buf = sub;
      std::sort(sorted_buf.begin(), sorted_buf.end());
      visit(sorted_buf);
      return;
    }
    while (!ext.empty()) {
      const int w = ext.back();
      ext.pop_back();
      std::vector<int> ext2 = ext;
      std::vector<int> marked;
      for (int u : f.adj[w]) {
        if (!closure[u]) {
          closure[u] = 1;
          marked.push_back(u);
          if (u > root) ext2.push_back(u);
        }
      }
      sub.push_back(w);
      extend(ext2, root);
      sub.pop_back();
      for (int u : marked) closure[u] = 0;
    }
  };

  for (int v = 1; v <= n; ++v) {
    if (!f.mask[v]) continue;
    sub.assign(1, v);
    closure[v] = 1;
    std::vector<int> ext;
    for (int u : f.adj[v]) {
      closure[u] = 1;
      if (u > v) ext.push_back(u);
    }
    extend(ext, v);
    closure[v] = 0;
    for (int u : f.adj[v]) closure[u] = 0;
  }
}

// Canonical code of a small vertex-coloured tree given as local 0-based
// adjacency lists; '0'/'1' colour prefix per vertex, minimum over all roots.
ShapeCode colored_code_rooted(const std::vector<std::vector<int>>& adj,
                              const std::vector<char>& color, int root, int parent) {
  std::vector<ShapeCode> kids;
  for (int u : adj[root]) {
    if (u != parent) kids.push_back(colored_code_rooted(adj, color, u, root));
  }
  std::sort(kids.begin(), kids.end());
  ShapeCode c;
  c += color[root] ? '1' : '0';
  c += '(';
  for (const auto& k : kids) c += k;
  c += ')';
  return c;
}

ShapeCode colored_code_min(const std::vector<std::vector<int>>& adj,
                           const std::vector<char>& color) {
  ShapeCode best;
  for (int r = 0; r < static_cast<int>(adj.size()); ++r) {
    ShapeCode c = colored_code_rooted(adj, color, r, -1);
    if (best.empty() || c < best) best = std::move(c);
  }
  return best;
}

std::vector<std::vector<int>> pattern_adjacency(const Pattern& p) {
  std::vector<std::vector<int>> adj(p.l);
  for (const auto& [a, b] : p.edges) {
    adj[a - 1].push_back(b - 1);
    adj[b - 1].push_back(a - 1);
  }
  return adj;
}

// Shared implementation of pattern_count / pattern_occurrences.
std::int64_t occurrences_impl(const LabelledTree& t, const Pattern& p, std::optional<int> cap,
                              std::vector<OccurrencePair>* out) {
  validate_pattern(p);
  const int n = t.n();
  const int l = p.l;
  if (l > n) return 0;
  const MaskedForest f = masked_forest(t, cap);

  auto hadj = pattern_adjacency(p);
  const std::vector<char> hcol(p.theta.begin(), p.theta.end());
  const ShapeCode code_h = colored_code_min(hadj, hcol);
  const int s = std::accumulate(p.theta.begin(), p.theta.end(), 0);

  std::int64_t total = 0;
  std::vector<std::vector<int>> uadj(l);
  std::vector<char> ucol(l);
  std::vector<int> boundary, free_local, choice;

  enumerate_connected_subsets(f, n, l, [&](const std::vector<int>& u) {
    boundary.clear();
    for (int i = 0; i < l; ++i) {
      uadj[i].clear();
      bool outside = false;
      for (int x : f.adj[u[i]]) {
        const auto it = std::lower_bound(u.begin(), u.end(), x);
        if (it != u.end() && *it == x) {
          uadj[i].push_back(static_cast<int>(it - u.begin()));
        } else {
          outside = true;
        }
      }
      if (outside) boundary.push_back(i);
    }
    const int b = static_cast<int>(boundary.size());
    if (b > s) return;

    free_local.clear();
    for (int i = 0; i < l; ++i) {
      if (!std::binary_search(boundary.begin(), boundary.end(), i)) free_local.push_back(i);
    }
    const int k = s - b;  // marked vertices to choose beyond the forced ones
    const int fsz = static_cast<int>(free_local.size());
    if (k > fsz) return;

    choice.resize(k);
    std::iota(choice.begin(), choice.end(), 0);
    while (true) {
      std::fill(ucol.begin(), ucol.end(), 0);
      for (int i : boundary) ucol[i] = 1;
      for (int i = 0; i < k; ++i) ucol[free_local[choice[i]]] = 1;
      if (colored_code_min(uadj, ucol) == code_h) {
        ++total;
        if (out) {
          OccurrencePair occ;
          occ.u = u;
          for (int i = 0; i < l; ++i) {
            if (ucol[i]) occ.w.push_back(u[i]);
          }
          out->push_back(std::move(occ));
        }
      }
      // next k-combination of {0..fsz-1} in lexicographic order
      int pos = k - 1;
      while (pos >= 0 && choice[pos] == fsz - k + pos) --pos;
      if (pos < 0) break;
      ++choice[pos];
      for (int i = pos + 1; i < k; ++i) choice[i] = choice[i - 1] + 1;
    }
  });
  return total;
}

}  // namespace

std::int64_t degree_count(const LabelledTree& t, int d) {
  if (d < 1) throw std::invalid_argument("degree must be at least 1");
  std::int64_t c = 0;
  for (int v = 1; v <= t.n(); ++v) {
    if (t.degree(v) == d) ++c;
  }
  return c;
}

int max_degree(const LabelledTree& t) {
  int best = 0;
  for (int v = 1; v <= t.n(); ++v) best = std::max(best, t.degree(v));
  return best;
}

ShapeCode canonical_code(const LabelledTree& t, int root) {
  const int n = t.n();
  if (root < 1 || root > n) throw std::invalid_argument("label out of range: " + std::to_string(root));
  std::vector<int> order;
  order.reserve(n);
  std::vector<int> parent(n + 1, 0);
  std::vector<std::vector<int>> children(n + 1);
  order.push_back(root);
  parent[root] = root;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int v = order[head];
    for (int u : t.neighbors(v)) {
      if (u == parent[v]) continue;
      parent[u] = v;
      children[v].push_back(u);
      order.push_back(u);
    }
  }
  std::vector<ShapeCode> code(n + 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    std::vector<ShapeCode> kids;
    kids.reserve(children[v].size());
    for (int u : children[v]) kids.push_back(std::move(code[u]));
    std::sort(kids.begin(), kids.end());
    ShapeCode c = "(";
    for (const auto& k : kids) c += k;
    c += ')';
    code[v] = std::move(c);
  }
  return code[root];
}

Pattern pattern_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("pattern json: ") + e.what());
  }
  Pattern p;
  try {
    p.l = j.at("l").get<int>();
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) {
        throw std::invalid_argument("pattern json: each edge must be a pair");
      }
      p.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    p.theta = j.at("theta").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("pattern json: ") + e.what());
  }
  validate_pattern(p);
  return p;
}

std::string pattern_to_json(const Pattern& p) {
  json j;
  j["l"] = p.l;
  json edges = json::array();
  for (const auto& [a, b] : p.edges) edges.push_back(json::array({a, b}));
  j["edges"] = std::move(edges);
  j["theta"] = p.theta;
  return j.dump();
}

void validate_pattern(const Pattern& p) {
  if (p.l < 1) throw std::invalid_argument("pattern must have at least one vertex");
  if (static_cast<int>(p.theta.size()) != p.l) {
    throw std::invalid_argument("theta length must equal the pattern size");
  }
  for (int v : p.theta) {
    if (v != 0 && v != 1) throw std::invalid_argument("theta entries must be 0 or 1");
  }
  if (static_cast<int>(p.edges.size()) != p.l - 1) {
    throw std::invalid_argument("pattern must have exactly l-1 edges");
  }
  if (p.l == 1) return;
  std::vector<std::vector<int>> adj(p.l);
  for (const auto& [a, b] : p.edges) {
    if (a < 1 || a > p.l || b < 1 || b > p.l) {
      throw std::invalid_argument("pattern edge label out of range");
    }
    if (a == b) throw std::invalid_argument("pattern edge is a self-loop");
    adj[a - 1].push_back(b - 1);
    adj[b - 1].push_back(a - 1);
  }
  std::vector<char> seen(p.l, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : adj[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  if (reached != p.l) throw std::invalid_argument("pattern is not a tree");
}

std::int64_t pattern_count(const LabelledTree& t, const Pattern& p, std::optional<int> degree_cap) {
  return occurrences_impl(t, p, degree_cap, nullptr);
}

std::vector<OccurrencePair> pattern_occurrences(const LabelledTree& t, const Pattern& p,
                                                std::optional<int> degree_cap) {
  std::vector<OccurrencePair> out;
  occurrences_impl(t, p, degree_cap, &out);
  std::sort(out.begin(), out.end(), [](const OccurrencePair& a, const OccurrencePair& b) {
    return a.u != b.u ? a.u < b.u : a.w < b.w;
  });
  return out;
}

std::int64_t pattern_ordered_embeddings(const LabelledTree& t, const Pattern& p,
                                        std::optional<int> degree_cap) {
  validate_pattern(p);
  const int n = t.n();
  const int l = p.l;
  if (l > n) return 0;
  const MaskedForest f = masked_forest(t, degree_cap);

  // Depth-first order of the pattern; every pattern edge joins a vertex to
  // its predecessor in this order, so extending along it maps all edges.
  auto hadj = pattern_adjacency(p);
  std::vector<int> order, par(l, -1);
  {
    std::vector<char> seen(l, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (int u : hadj[v]) {
        if (!seen[u]) {
          seen[u] = 1;
          par[u] = v;
          stack.push_back(u);
        }
      }
    }
  }

  std::vector<int> phi(l, 0);
  std::vector<char> used(n + 1, 0);
  std::int64_t count = 0;

  std::function<void(int)> rec = [&](int k) {
    if (k == l) {
      for (int i = 0; i < l; ++i) {
        if (p.theta[i] == 0) {
          for (int x : f.adj[phi[i]]) {
            if (!used[x]) return;  // unmarked image vertex touches the outside
          }
        }
      }
      ++count;
      return;
    }
    const int h = order[k];
    if (k == 0) {
      for (int v = 1; v <= n; ++v) {
        if (!f.mask[v]) continue;
        phi[h] = v;
        used[v] = 1;
        rec(k + 1);
        used[v] = 0;
      }
    } else {
      for (int v : f.adj[phi[par[h]]]) {
        if (used[v]) continue;
        phi[h] = v;
        used[v] = 1;
        rec(k + 1);
        used[v] = 0;
      }
    }
  };
  rec(0);
  return count;
}

std::int64_t path_count(const LabelledTree& t, int l, std::optional<double> beta_filter) {
  if (l < 2) throw std::invalid_argument("path length must be at least 2 vertices");
  const int n = t.n();
  std::vector<char> mask(n + 1, 1);
  if (beta_filter) mask = beta_good_vertices(t, *beta_filter);

  // Flat adjacency over the kept edges; directed edge ids index into `nbr`.
  std::vector<int> off(n + 2, 0);
  for (int v = 1; v <= n; ++v) {
    if (!mask[v]) continue;
    for (int u : t.neighbors(v)) {
      if (mask[u]) ++off[v + 1];
    }
  }
  for (int v = 1; v <= n; ++v) off[v + 1] += off[v];
  const int m = off[n + 1];
  std::vector<int> nbr(m);
  {
    std::vector<int> cur(off.begin(), off.end() - 1);
    for (int v = 1; v <= n; ++v) {
      if (!mask[v]) continue;
      for (int u : t.neighbors(v)) {
        if (mask[u]) nbr[cur[v]++] = u;
      }
    }
  }
  if (l == 2) return m / 2;

  std::vector<int> rev(m);
  for (int v = 1; v <= n; ++v) {
    for (int e = off[v]; e < off[v + 1]; ++e) {
      const int u = nbr[e];
      const auto base = nbr.begin() + off[u];
      const auto it = std::lower_bound(base, nbr.begin() + off[u + 1], v);
      rev[e] = static_cast<int>(it - nbr.begin());
    }
  }

  // a[e = u->v] counts vertices at distance k from u whose path leaves via v;
  // w[v] sums a over out-edges of v, i.e. the size of v's distance-k layer.
  std::vector<std::int64_t> a_prev(m, 1), a_cur(m), w_prev(n + 1, 0), w_cur(n + 1, 0);
  for (int v = 1; v <= n; ++v) w_prev[v] = off[v + 1] - off[v];
  for (int k = 2; k <= l - 1; ++k) {
    for (int e = 0; e < m; ++e) a_cur[e] = w_prev[nbr[e]] - a_prev[rev[e]];
    for (int v = 1; v <= n; ++v) {
      std::int64_t sum = 0;
      for (int e = off[v]; e < off[v + 1]; ++e) sum += a_cur[e];
      w_cur[v] = sum;
    }
    std::swap(a_prev, a_cur);
    std::swap(w_prev, w_cur);
  }
  std::int64_t total = 0;
  for (int v = 1; v <= n; ++v) total += w_prev[v];
  return total / 2;
}

std::vector<char> beta_good_vertices(const LabelledTree& t, double c) {
  if (!(c > 0)) throw std::invalid_argument("layer-growth threshold must be positive");
  const int n = t.n();
  std::vector<char> good(n + 1, 1);
  good[0] = 0;
  // Layers have at most n-1 vertices, so depths beyond (n-1)/c pass trivially.
  const int depth_cap = c >= static_cast<double>(n - 1)
                            ? 1
                            : static_cast<int>(std::floor(static_cast<double>(n - 1) / c));
  std::vector<char> vis(n + 1, 0);
  std::vector<int> cur, nxt, seen;
  for (int src = 1; src <= n; ++src) {
    cur.assign(1, src);
    seen.assign(1, src);
    vis[src] = 1;
    bool ok = true;
    for (int d = 1; d <= depth_cap && !cur.empty(); ++d) {
      nxt.clear();
      for (int v : cur) {
        for (int u : t.neighbors(v)) {
          if (!vis[u]) {
            vis[u] = 1;
            nxt.push_back(u);
            seen.push_back(u);
          }
        }
      }
      if (static_cast<double>(nxt.size()) > c * static_cast<double>(d)) {
        ok = false;
        break;
      }
      std::swap(cur, nxt);
    }
    good[src] = ok ? 1 : 0;
    for (int v : seen) vis[v] = 0;
  }
  return good;
}

std::int64_t pattern_aut(const Pattern& p) {
  validate_pattern(p);
  const int l = p.l;
  if (l > 10) throw std::invalid_argument("pattern too large for brute-force automorphism count");
  std::vector<unsigned> adj(l, 0);
  for (const auto& [a, b] : p.edges) {
    adj[a - 1] |= 1u << (b - 1);
    adj[b - 1] |= 1u << (a - 1);
  }
  std::vector<int> perm(l);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t count = 0;
  do {
    bool ok = true;
    for (int i = 0; i < l && ok; ++i) {
      if (p.theta[perm[i]] != p.theta[i]) ok = false;
    }
    for (std::size_t e = 0; e < p.edges.size() && ok; ++e) {
      const auto& [a, b] = p.edges[e];
      if (!((adj[perm[a - 1]] >> perm[b - 1]) & 1u)) ok = false;
    }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

Pattern path_pattern(int l) {
  if (l < 1) throw std::invalid_argument("pattern must have at least one vertex");
  Pattern p;
  p.l = l;
  for (int i = 1; i < l; ++i) p.edges.emplace_back(i, i + 1);
  p.theta.assign(l, 1);
  return p;
}

}  // namespace treelab
