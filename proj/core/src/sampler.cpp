#include "treelab/sampler.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace treelab {

LabelledTree aldous_broder_stage1(const AttachmentVector& u) {
  const int n = static_cast<int>(u.size()) + 1;
  if (n < 2) throw std::invalid_argument("malformed vector: attachment vector must be non-empty");
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (int i = 1; i <= n - 1; ++i) {
    const int ui = u[i - 1];
    if (ui < 1 || ui > n) {
      throw std::invalid_argument("malformed vector: entry " + std::to_string(ui) +
                                  " out of range for n=" + std::to_string(n));
    }
    edges.emplace_back(i + 1, std::min(i, ui));
  }
  return build_tree(n, std::move(edges));
}

AttachmentVector sample_attachment(int n, RngStream& rng) {
  if (n < 2) throw std::invalid_argument("malformed vector: need n >= 2");
  AttachmentVector u(n - 1);
  for (auto& x : u) x = rng.uniform_label(n);
  return u;
}

std::vector<int> sample_permutation(int n, RngStream& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

LabelledTree sample_uniform(int n, RngStream& rng) {
  const LabelledTree skeleton = aldous_broder_stage1(sample_attachment(n, rng));
  return relabel(skeleton, sample_permutation(n, rng));
}

LabelledTree sample_uniform(int n, SeedSpec seed) {
  RngStream rng(seed);
  return sample_uniform(n, rng);
}

LabelledTree prufer_decode(const PruferSequence& seq, int n) {
  if (n < 2) throw std::invalid_argument("malformed vector: need n >= 2");
  if (static_cast<int>(seq.size()) != n - 2) {
    throw std::invalid_argument("malformed vector: sequence length must be n-2");
  }
  for (int x : seq) {
    if (x < 1 || x > n) {
      throw std::invalid_argument("malformed vector: entry " + std::to_string(x) +
                                  " out of range for n=" + std::to_string(n));
    }
  }
  // degree[v] = 1 + multiplicity of v in the sequence
  std::vector<int> degree(n + 1, 1);
  for (int x : seq) ++degree[x];

  std::vector<Edge> edges;
  edges.reserve(n - 1);
  // Sweep with a pointer to the smallest-labelled current leaf; standard
  // linear-time decoding.
  int ptr = 1;
  while (degree[ptr] != 1) ++ptr;
  int leaf = ptr;
  for (int x : seq) {
    edges.emplace_back(leaf, x);
    if (--degree[x] == 1 && x < ptr) {
      leaf = x;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.emplace_back(leaf, n);
  return build_tree(n, std::move(edges));
}

PruferSequence prufer_encode(const LabelledTree& t) {
  const int n = t.n();
  PruferSequence seq;
  seq.reserve(n - 2);
  std::vector<int> degree(n + 1);
  for (int v = 1; v <= n; ++v) degree[v] = t.degree(v);
  // parent[] with respect to root n, so stripping a leaf knows its neighbour
  // in the shrinking tree without scanning.
  std::vector<int> parent(n + 1, 0);
  {
    std::vector<int> stack{n};
    std::vector<char> seen(n + 1, 0);
    seen[n] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : t.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = 1;
          parent[w] = v;
          stack.push_back(w);
        }
      }
    }
  }
  int ptr = 1;
  while (degree[ptr] != 1) ++ptr;
  int leaf = ptr;
  for (int step = 0; step < n - 2; ++step) {
    const int p = parent[leaf];
    seq.push_back(p);
    if (--degree[p] == 1 && p < ptr) {
      leaf = p;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  return seq;
}

LabelledTree sample_prufer(int n, RngStream& rng) {
  if (n < 2) throw std::invalid_argument("malformed vector: need n >= 2");
  PruferSequence seq(n - 2);
  for (auto& x : seq) x = rng.uniform_label(n);
  return prufer_decode(seq, n);
}

LabelledTree sample_prufer(int n, SeedSpec seed) {
  RngStream rng(seed);
  return sample_prufer(n, rng);
}

}  // namespace treelab
