#include "treelab/automorphisms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace treelab {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = 0x9E3779B97F4A7C15ull ^ v.size();
    for (int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Interns rooted shapes: the key of a shape is the sorted list of its
// children's shape ids, so equal ids mean identical rooted shapes.
struct InternTable {
  std::unordered_map<std::vector<int>, int, VecHash> ids;
  std::vector<std::vector<int>> children_of;  // per id, sorted child ids
  std::vector<int> size_of;                   // per id, vertex count

  int intern(std::vector<int> key) {
    int sz = 1;
    for (int c : key) sz += size_of[c];
    const auto [it, inserted] = ids.try_emplace(std::move(key), static_cast<int>(size_of.size()));
    if (inserted) {
      children_of.push_back(it->first);
      size_of.push_back(sz);
    }
    return it->second;
  }
};

// One rooted pass over the tree. A blocked vertex (0 = none) is treated as
// absent, which splits a bicentral tree into the half containing the root.
struct RootedScan {
  std::vector<int> order;               // traversal order from the root
  std::vector<std::vector<int>> kids;   // children per vertex
  std::vector<std::vector<int>> key;    // sorted child shape ids per vertex
  std::vector<int> id;                  // shape id per vertex
};

RootedScan scan_rooted(const LabelledTree& t, int root, InternTable& table, int blocked = 0) {
  const int n = t.n();
  if (root < 1 || root > n) throw std::invalid_argument("label out of range: " + std::to_string(root));
  RootedScan s;
  s.order.reserve(n);
  s.kids.assign(n + 1, {});
  s.key.assign(n + 1, {});
  s.id.assign(n + 1, -1);
  std::vector<int> parent(n + 1, 0);
  parent[root] = root;
  s.order.push_back(root);
  for (std::size_t head = 0; head < s.order.size(); ++head) {
    const int v = s.order[head];
    for (int u : t.neighbors(v)) {
      if (u == parent[v] || u == blocked) continue;
      parent[u] = v;
      s.kids[v].push_back(u);
      s.order.push_back(u);
    }
  }
  for (auto it = s.order.rbegin(); it != s.order.rend(); ++it) {
    const int v = *it;
    auto& key = s.key[v];
    key.reserve(s.kids[v].size());
    for (int u : s.kids[v]) key.push_back(s.id[u]);
    std::sort(key.begin(), key.end());
    s.id[v] = table.intern(key);
  }
  return s;
}

// Sum of log m! over maximal runs of equal ids in a sorted key, restricted to
// ids accepted by the filter.
template <typename Accept>
double log_runs(const std::vector<int>& key, Accept&& accept) {
  double total = 0.0;
  std::size_t i = 0;
  while (i < key.size()) {
    std::size_t j = i;
    while (j < key.size() && key[j] == key[i]) ++j;
    if (accept(key[i]) && j - i >= 2) total += log_factorial(j - i);
    i = j;
  }
  return total;
}

template <typename Accept>
BigInt exact_runs(const std::vector<int>& key, Accept&& accept) {
  BigInt total = 1;
  std::size_t i = 0;
  while (i < key.size()) {
    std::size_t j = i;
    while (j < key.size() && key[j] == key[i]) ++j;
    if (accept(key[i]) && j - i >= 2) total *= factorial_big(j - i);
    i = j;
  }
  return total;
}

// Rooted-automorphism order per interned shape id, computed in id order
// (children ids are always smaller than the parent's id).
std::vector<BigInt> aut_per_id(const InternTable& table) {
  std::vector<BigInt> aut(table.size_of.size());
  for (std::size_t id = 0; id < aut.size(); ++id) {
    BigInt a = exact_runs(table.children_of[id], [](int) { return true; });
    for (int c : table.children_of[id]) a *= aut[c];
    aut[id] = a;
  }
  return aut;
}

// Parses a canonical shape code; returns the sorted child codes of the root.
// Throws std::invalid_argument on malformed input.
std::vector<std::string> split_code(const ShapeCode& code) {
  if (code.size() < 2 || code.front() != '(' || code.back() != ')') {
    throw std::invalid_argument("malformed shape code: " + code);
  }
  std::vector<std::string> kids;
  int depth = 0;
  std::size_t start = 1;
  for (std::size_t i = 1; i + 1 < code.size(); ++i) {
    const char c = code[i];
    if (c == '(') {
      if (depth == 0) start = i;
      ++depth;
    } else if (c == ')') {
      --depth;
      if (depth < 0) throw std::invalid_argument("malformed shape code: " + code);
      if (depth == 0) kids.push_back(code.substr(start, i - start + 1));
    } else {
      throw std::invalid_argument("malformed shape code: " + code);
    }
  }
  if (depth != 0) throw std::invalid_argument("malformed shape code: " + code);
  return kids;
}

struct ParsedShape {
  int size = 0;
  BigInt aut = 1;
};

ParsedShape parse_shape(const ShapeCode& code) {
  const auto kids = split_code(code);
  ParsedShape p;
  p.size = 1;
  std::size_t i = 0;
  while (i < kids.size()) {
    std::size_t j = i;
    while (j < kids.size() && kids[j] == kids[i]) ++j;
    const ParsedShape child = parse_shape(kids[i]);
    p.size += child.size * static_cast<int>(j - i);
    if (j - i >= 2) p.aut *= factorial_big(j - i);
    for (std::size_t k = i; k < j; ++k) p.aut *= child.aut;
    i = j;
  }
  return p;
}

// Looks up the interned id of a shape code within an existing table; returns
// -1 when the shape never occurs in the scanned tree.
int id_of_code(const ShapeCode& code, const InternTable& table) {
  const auto kids = split_code(code);
  std::vector<int> key;
  key.reserve(kids.size());
  for (const auto& k : kids) {
    const int cid = id_of_code(k, table);
    if (cid < 0) return -1;
    key.push_back(cid);
  }
  std::sort(key.begin(), key.end());
  const auto it = table.ids.find(key);
  return it == table.ids.end() ? -1 : it->second;
}

}  // namespace

BranchTable branch_table(const LabelledTree& t, int root) {
  InternTable table;
  const RootedScan s = scan_rooted(t, root, table);
  const auto aut = aut_per_id(table);

  const int id_count = static_cast<int>(table.size_of.size());
  std::vector<ShapeCode> code(id_count);
  for (int id = 0; id < id_count; ++id) {
    std::vector<ShapeCode> kid_codes;
    kid_codes.reserve(table.children_of[id].size());
    for (int c : table.children_of[id]) kid_codes.push_back(code[c]);
    std::sort(kid_codes.begin(), kid_codes.end());
    ShapeCode c = "(";
    for (const auto& k : kid_codes) c += k;
    c += ')';
    code[id] = std::move(c);
  }

  BranchTable bt;
  bt.root = root;
  // The root's own subtree is the whole tree; it is interned last and is
  // never a branch, so it is left out of the shape list.
  const int root_id = s.id[root];
  bt.shapes.reserve(id_count - 1);
  for (int id = 0; id < id_count; ++id) {
    if (id == root_id) continue;
    BranchShape b;
    b.code = code[id];
    b.size = table.size_of[id];
    b.labellings = factorial_big(table.size_of[id]) / aut[id];
    bt.shapes.push_back(std::move(b));
  }
  bt.at.assign(t.n() + 1, {});
  for (int v = 1; v <= t.n(); ++v) {
    const auto& key = s.key[v];
    std::size_t i = 0;
    while (i < key.size()) {
      std::size_t j = i;
      while (j < key.size() && key[j] == key[i]) ++j;
      bt.at[v].emplace_back(key[i], static_cast<int>(j - i));
      i = j;
    }
  }
  return bt;
}

double log_aut_rooted(const LabelledTree& t, int root) {
  InternTable table;
  const RootedScan s = scan_rooted(t, root, table);
  double total = 0.0;
  for (int v : s.order) total += log_runs(s.key[v], [](int) { return true; });
  return total;
}

BigInt aut_rooted_exact(const LabelledTree& t, int root) {
  InternTable table;
  const RootedScan s = scan_rooted(t, root, table);
  BigInt total = 1;
  for (int v : s.order) total *= exact_runs(s.key[v], [](int) { return true; });
  return total;
}

double log_aut_small(const LabelledTree& t, int root, int threshold) {
  if (threshold < 1) throw std::invalid_argument("branch size threshold must be at least 1");
  InternTable table;
  const RootedScan s = scan_rooted(t, root, table);
  double total = 0.0;
  for (int v : s.order) {
    total += log_runs(s.key[v], [&](int id) { return table.size_of[id] <= threshold; });
  }
  return total;
}

BigInt aut_small_exact(const LabelledTree& t, int root, int threshold) {
  if (threshold < 1) throw std::invalid_argument("branch size threshold must be at least 1");
  InternTable table;
  const RootedScan s = scan_rooted(t, root, table);
  BigInt total = 1;
  for (int v : s.order) {
    total *= exact_runs(s.key[v], [&](int id) { return table.size_of[id] <= threshold; });
  }
  return total;
}

std::vector<int> tree_centers(const LabelledTree& t) {
  const int n = t.n();
  std::vector<int> deg(n + 1, 0);
  for (int v = 1; v <= n; ++v) deg[v] = t.degree(v);
  std::vector<int> frontier;
  std::vector<char> removed(n + 1, 0);
  for (int v = 1; v <= n; ++v) {
    if (deg[v] <= 1) frontier.push_back(v);
  }
  int remaining = n;
  while (remaining > 2) {
    std::vector<int> next;
    for (int v : frontier) {
      removed[v] = 1;
      --remaining;
      for (int u : t.neighbors(v)) {
        if (!removed[u] && --deg[u] == 1) next.push_back(u);
      }
    }
    frontier = std::move(next);
  }
  std::vector<int> centers;
  for (int v = 1; v <= n; ++v) {
    if (!removed[v]) centers.push_back(v);
  }
  return centers;
}

double log_aut_full(const LabelledTree& t) {
  const auto centers = tree_centers(t);
  if (centers.size() == 1) return log_aut_rooted(t, centers[0]);
  InternTable table;
  const RootedScan s1 = scan_rooted(t, centers[0], table, centers[1]);
  const RootedScan s2 = scan_rooted(t, centers[1], table, centers[0]);
  double total = 0.0;
  for (int v : s1.order) total += log_runs(s1.key[v], [](int) { return true; });
  for (int v : s2.order) total += log_runs(s2.key[v], [](int) { return true; });
  if (s1.id[centers[0]] == s2.id[centers[1]]) total += std::log(2.0);
  return total;
}

BigInt aut_full_exact(const LabelledTree& t) {
  const auto centers = tree_centers(t);
  if (centers.size() == 1) return aut_rooted_exact(t, centers[0]);
  InternTable table;
  const RootedScan s1 = scan_rooted(t, centers[0], table, centers[1]);
  const RootedScan s2 = scan_rooted(t, centers[1], table, centers[0]);
  BigInt total = 1;
  for (int v : s1.order) total *= exact_runs(s1.key[v], [](int) { return true; });
  for (int v : s2.order) total *= exact_runs(s2.key[v], [](int) { return true; });
  if (s1.id[centers[0]] == s2.id[centers[1]]) total *= 2;
  return total;
}

double lambda_branch(const BranchShape& b, std::optional<std::int64_t> n) {
  if (b.size < 1) throw std::invalid_argument("branch must have at least one vertex");
  double log_lambda = log_big(b.labellings) - static_cast<double>(b.size) -
                      log_factorial(static_cast<std::size_t>(b.size));
  if (n) {
    if (*n < 1) throw std::invalid_argument("tree size must be positive");
    log_lambda += static_cast<double>(b.size) / (2.0 * static_cast<double>(*n));
  }
  return std::exp(log_lambda);
}

BranchShape branch_shape_from_code(const ShapeCode& code) {
  const ParsedShape p = parse_shape(code);
  BranchShape b;
  b.code = code;
  b.size = p.size;
  b.labellings = factorial_big(p.size) / p.aut;
  return b;
}

BranchShape branch_shape_singleton() { return branch_shape_from_code("()"); }

BranchShape branch_shape_rooted_edge() { return branch_shape_from_code("(())"); }

BigInt aut_rooted_of_code(const ShapeCode& code) { return parse_shape(code).aut; }

namespace {

// Size of the branch rooted at c (parent p), giving up at limit + 1.
int branch_size_bounded(const LabelledTree& t, int c, int p, int limit) {
  int size = 0;
  std::vector<std::pair<int, int>> stack{{c, p}};
  while (!stack.empty()) {
    const auto [v, par] = stack.back();
    stack.pop_back();
    if (++size > limit) return limit + 1;
    for (int w : t.neighbors(v))
      if (w != par) stack.emplace_back(w, v);
  }
  return size;
}

// Canonical code of the branch rooted at v (parent p); intended for branches
// already known to be small.
ShapeCode branch_code_at(const LabelledTree& t, int v, int p) {
  std::vector<ShapeCode> kids;
  for (int w : t.neighbors(v))
    if (w != p) kids.push_back(branch_code_at(t, w, v));
  std::sort(kids.begin(), kids.end());
  ShapeCode out = "(";
  for (const ShapeCode& k : kids) out += k;
  out += ")";
  return out;
}

}  // namespace

std::int64_t count_branches(const LabelledTree& t, int root, int i, const ShapeCode& code) {
  if (i < 1 || i > t.n()) throw std::invalid_argument("label out of range: " + std::to_string(i));
  if (root < 1 || root > t.n())
    throw std::invalid_argument("label out of range: " + std::to_string(root));
  const int target_size = parse_shape(code).size;  // also rejects malformed codes

  // Parent of i in the tree rooted at `root` (0 when i is the root): BFS.
  int parent_of_i = 0;
  if (i != root) {
    std::vector<int> parent(static_cast<std::size_t>(t.n()) + 1, 0);
    std::vector<int> queue{root};
    parent[root] = root;
    for (std::size_t head = 0; head < queue.size() && parent[i] == 0; ++head) {
      const int v = queue[head];
      for (int w : t.neighbors(v)) {
        if (parent[w] == 0) {
          parent[w] = v;
          queue.push_back(w);
        }
      }
    }
    parent_of_i = parent[i];
  }

  // Only branches of exactly the target size can match; measure each with an
  // early-abort scan and canonicalize just the candidates.
  std::int64_t count = 0;
  for (int c : t.neighbors(i)) {
    if (c == parent_of_i) continue;
    if (branch_size_bounded(t, c, i, target_size) != target_size) continue;
    if (branch_code_at(t, c, i) == code) ++count;
  }
  return count;
}

}  // namespace treelab
