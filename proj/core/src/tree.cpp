#include "treelab/tree.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace treelab {

namespace {

void check_label(int v, int n, const char* what) {
  if (v < 1 || v > n) {
    throw std::invalid_argument(std::string("label out of range: ") + what + " " +
                                std::to_string(v) + " for n=" + std::to_string(n));
  }
}

// BFS from `start`, optionally refusing to traverse the edge {skip_u, skip_v}.
// Writes distances (-1 for unreached) into dist, which must be sized n+1.
void bfs(const LabelledTree& t, int start, std::vector<int>& dist, int skip_u = 0, int skip_v = 0) {
  std::fill(dist.begin(), dist.end(), -1);
  std::vector<int> queue;
  queue.reserve(t.n());
  dist[start] = 0;
  queue.push_back(start);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (int w : t.neighbors(u)) {
      if ((u == skip_u && w == skip_v) || (u == skip_v && w == skip_u)) continue;
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
}

}  // namespace

bool LabelledTree::has_edge(int u, int v) const noexcept {
  if (u < 1 || u > n_ || v < 1 || v > n_ || u == v) return false;
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

LabelledTree build_tree(int n, std::vector<Edge> edges) {
  if (n < 2) throw std::invalid_argument("not-a-tree: need n >= 2, got n=" + std::to_string(n));
  if (static_cast<int>(edges.size()) != n - 1) {
    throw std::invalid_argument("not-a-tree: expected " + std::to_string(n - 1) + " edges, got " +
                                std::to_string(edges.size()));
  }
  for (auto& [u, v] : edges) {
    check_label(u, n, "edge endpoint");
    check_label(v, n, "edge endpoint");
    if (u == v) throw std::invalid_argument("not-a-tree: self-loop at " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  // Lexicographic sort in linear time: stable counting passes on the minor
  // key (second endpoint), then the major key (first endpoint).
  {
    std::vector<Edge> tmp(edges.size());
    std::vector<int> cnt(static_cast<std::size_t>(n) + 2, 0);
    for (const Edge& e : edges) ++cnt[e.second + 1];
    for (int v = 1; v <= n; ++v) cnt[v + 1] += cnt[v];
    for (const Edge& e : edges) tmp[static_cast<std::size_t>(cnt[e.second]++)] = e;
    std::fill(cnt.begin(), cnt.end(), 0);
    for (const Edge& e : tmp) ++cnt[e.first + 1];
    for (int v = 1; v <= n; ++v) cnt[v + 1] += cnt[v];
    for (const Edge& e : tmp) edges[static_cast<std::size_t>(cnt[e.first]++)] = e;
  }
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw std::invalid_argument("not-a-tree: duplicate edge");
  }

  LabelledTree t;
  t.n_ = n;
  t.edges_ = std::move(edges);
  t.off_.assign(n + 2, 0);
  for (const auto& [u, v] : t.edges_) {
    ++t.off_[u + 1];
    ++t.off_[v + 1];
  }
  for (int v = 1; v <= n; ++v) t.off_[v + 1] += t.off_[v];
  t.adj_.resize(2 * (n - 1));
  std::vector<int> cursor(t.off_.begin(), t.off_.end());
  // Scanning normalized (u < v) edges in lexicographic order appends each
  // vertex's smaller neighbours (in increasing order) before its larger
  // neighbours (also increasing), so every neighbour list comes out sorted.
  for (const auto& [u, v] : t.edges_) {
    t.adj_[cursor[u]++] = v;
    t.adj_[cursor[v]++] = u;
  }

  // n-1 edges and connectivity together certify a tree.
  std::vector<int> dist(n + 1);
  bfs(t, 1, dist);
  for (int v = 1; v <= n; ++v) {
    if (dist[v] < 0) throw std::invalid_argument("not-a-tree: disconnected (n-1 edges with a cycle)");
  }
  return t;
}

int distance(const LabelledTree& t, const std::vector<int>& a, const std::vector<int>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty set in distance query");
  for (int v : a) check_label(v, t.n(), "set element");
  for (int v : b) check_label(v, t.n(), "set element");

  // Multi-source BFS from all of A at once: the first B vertex reached is at
  // distance min over pairs.
  std::vector<int> dist(t.n() + 1, -1);
  std::vector<char> in_b(t.n() + 1, 0);
  for (int v : b) in_b[v] = 1;
  std::vector<int> queue;
  queue.reserve(t.n());
  for (int v : a) {
    if (dist[v] != 0) {
      dist[v] = 0;
      queue.push_back(v);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    if (in_b[u]) return dist[u];
    for (int w : t.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  throw std::logic_error("distance: tree is connected, B must be reachable");
}

int distance(const LabelledTree& t, const VertexSetPair& sets) { return distance(t, sets.a, sets.b); }

BetaValue beta(const LabelledTree& t) {
  const int n = t.n();
  BetaValue best{0, 1};
  std::vector<int> dist(n + 1);
  std::vector<std::int64_t> layer(n, 0);
  for (int i = 1; i <= n; ++i) {
    bfs(t, i, dist);
    std::fill(layer.begin(), layer.end(), 0);
    int ecc = 0;
    for (int v = 1; v <= n; ++v) {
      if (dist[v] > 0) {
        ++layer[dist[v]];
        ecc = std::max(ecc, dist[v]);
      }
    }
    for (int d = 1; d <= ecc; ++d) {
      // layer[d]/d > best.num/best.den, compared exactly in 64-bit integers
      if (layer[d] * best.den > best.num * static_cast<std::int64_t>(d)) {
        best.num = layer[d];
        best.den = d;
      }
    }
  }
  return best;
}

bool perturbation_valid(const LabelledTree& t, const Perturbation& p) {
  if (p.i < 1 || p.i > t.n() || p.j < 1 || p.j > t.n() || p.k < 1 || p.k > t.n()) return false;
  if (!t.has_edge(p.i, p.j)) return false;
  if (p.i == p.k || t.has_edge(p.i, p.k)) return false;
  std::vector<int> dist(t.n() + 1);
  bfs(t, p.j, dist, p.i, p.j);
  return dist[p.k] >= 0;
}

LabelledTree perturb(const LabelledTree& t, const Perturbation& p) {
  check_label(p.i, t.n(), "perturbation i");
  check_label(p.j, t.n(), "perturbation j");
  check_label(p.k, t.n(), "perturbation k");
  if (!t.has_edge(p.i, p.j)) {
    throw std::invalid_argument("edge-absent: {" + std::to_string(p.i) + "," + std::to_string(p.j) +
                                "} is not an edge");
  }
  if (t.has_edge(p.i, p.k)) {
    throw std::invalid_argument("edge-present: {" + std::to_string(p.i) + "," + std::to_string(p.k) +
                                "} already an edge");
  }
  // After deleting {i,j} the tree splits into the component of j and the
  // component of i; inserting {i,k} reconnects iff k sits on j's side,
  // i.e. the original path from j to k avoids i.
  std::vector<int> dist(t.n() + 1);
  bfs(t, p.j, dist, p.i, p.j);
  if (p.i == p.k || dist[p.k] < 0) {
    throw std::invalid_argument("cycle: inserting {" + std::to_string(p.i) + "," + std::to_string(p.k) +
                                "} after deleting {" + std::to_string(p.i) + "," + std::to_string(p.j) +
                                "} does not give a tree");
  }

  std::vector<Edge> edges = t.edges();
  const Edge out{std::min(p.i, p.j), std::max(p.i, p.j)};
  const Edge in{std::min(p.i, p.k), std::max(p.i, p.k)};
  for (auto& e : edges) {
    if (e == out) {
      e = in;
      break;
    }
  }
  return build_tree(t.n(), std::move(edges));
}

LabelledTree relabel(const LabelledTree& t, const std::vector<int>& omega) {
  const int n = t.n();
  if (static_cast<int>(omega.size()) != n) throw std::invalid_argument("not a permutation: wrong length");
  std::vector<char> seen(n + 1, 0);
  for (int v : omega) {
    if (v < 1 || v > n || seen[v]) throw std::invalid_argument("not a permutation");
    seen[v] = 1;
  }
  std::vector<Edge> edges;
  edges.reserve(t.edges().size());
  for (const auto& [u, v] : t.edges()) edges.emplace_back(omega[u - 1], omega[v - 1]);
  return build_tree(n, std::move(edges));
}

std::string to_text(const LabelledTree& t) {
  std::ostringstream os;
  write_tree(os, t);
  return os.str();
}

void write_tree(std::ostream& os, const LabelledTree& t) {
  os << t.n() << '\n';
  for (const auto& [u, v] : t.edges()) os << u << ' ' << v << '\n';
}

LabelledTree read_tree(std::istream& is) {
  int n = 0;
  if (!(is >> n)) throw std::invalid_argument("tree text: missing vertex count");
  if (n < 2) throw std::invalid_argument("not-a-tree: need n >= 2, got n=" + std::to_string(n));
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (int e = 0; e < n - 1; ++e) {
    int u = 0, v = 0;
    if (!(is >> u >> v)) throw std::invalid_argument("tree text: truncated edge list");
    edges.emplace_back(u, v);
  }
  return build_tree(n, std::move(edges));
}

LabelledTree tree_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_tree(is);
}

}  // namespace treelab
