#include "treelab/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace treelab {

void enumerate_trees(int n, const std::function<void(const LabelledTree&)>& visit) {
  if (n < 2 || n > 9) throw std::invalid_argument("tree enumeration supports 2 <= n <= 9");
  PruferSequence seq(std::max(0, n - 2), 1);
  while (true) {
    visit(prufer_decode(seq, n));
    std::size_t i = 0;
    while (i < seq.size() && seq[i] == n) {
      seq[i] = 1;
      ++i;
    }
    if (i == seq.size()) break;
    ++seq[i];
  }
}

BigInt tree_count(int n) {
  if (n < 2) throw std::invalid_argument("tree count requires n >= 2");
  return pow_big(BigInt(n), static_cast<unsigned long>(n - 2));
}

BigInt ExactDistribution::count_of(const BigRat& value) const {
  const auto it = std::lower_bound(
      pmf.begin(), pmf.end(), value,
      [](const std::pair<BigRat, BigInt>& a, const BigRat& v) { return a.first < v; });
  if (it == pmf.end() || it->first != value) return 0;
  return it->second;
}

ExactDistribution exact_statistics(int n, const ExactParameter& f) {
  ExactDistribution d;
  d.n = n;
  d.parameter = f.name;
  std::map<BigRat, BigInt> acc;
  BigInt count = 0;
  BigRat sum = 0, sumsq = 0;
  enumerate_trees(n, [&](const LabelledTree& t) {
    const BigRat v = f.eval(t);
    acc[v] += 1;
    sum += v;
    sumsq += v * v;
    count += 1;
  });
  d.total = count;
  const BigRat total(count);
  d.mean = sum / total;
  d.variance = sumsq / total - d.mean * d.mean;
  d.pmf.assign(acc.begin(), acc.end());
  return d;
}

BigInt brute_aut(const LabelledTree& t) {
  const int n = t.n();
  if (n > 9) throw std::invalid_argument("brute-force automorphism count supports n <= 9");
  if (n == 9) {
    std::cerr << "brute_aut: n = 9 checks 9! permutations per call; expect seconds\n";
  }
  std::array<std::uint16_t, 10> adj{};
  for (const auto& [u, v] : t.edges()) {
    adj[u] |= static_cast<std::uint16_t>(1u << v);
    adj[v] |= static_cast<std::uint16_t>(1u << u);
  }
  std::array<int, 9> perm{};
  std::iota(perm.begin(), perm.begin() + n, 1);
  long long count = 0;
  do {
    bool ok = true;
    for (const auto& [u, v] : t.edges()) {
      if (!((adj[perm[u - 1]] >> perm[v - 1]) & 1u)) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.begin() + n));
  return BigInt(static_cast<long>(count));
}

MartingaleTrace doob_stage1_trace(int n, const ExactParameter& f, bool relabel_invariant) {
  if (n < 2) throw std::invalid_argument("martingale trace requires n >= 2");
  if (relabel_invariant ? n > 6 : n > 5) {
    throw std::invalid_argument("martingale trace grid too large for this n");
  }
  const int len = n - 1;
  std::int64_t grid = 1;
  for (int i = 0; i < len; ++i) grid *= n;

  std::vector<std::vector<int>> perms;
  if (!relabel_invariant) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    do {
      perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  const BigRat n_fact(factorial_big(n));

  // Full table of F_hat over the attachment grid. Index convention: the first
  // coordinate is the least significant digit, idx = sum (u_j - 1) n^{j-1}.
  std::vector<BigRat> fhat(grid);
  {
    AttachmentVector u(len, 1);
    for (std::int64_t idx = 0; idx < grid; ++idx) {
      const LabelledTree t = aldous_broder_stage1(u);
      if (relabel_invariant) {
        fhat[idx] = f.eval(t);
      } else {
        BigRat s = 0;
        for (const auto& omega : perms) s += f.eval(relabel(t, omega));
        fhat[idx] = s / n_fact;
      }
      std::size_t j = 0;
      while (j < u.size() && u[j] == n) {
        u[j] = 1;
        ++j;
      }
      if (j < u.size()) ++u[j];
    }
  }

  MartingaleTrace trace;
  trace.n = n;
  trace.parameter = f.name;

  // Each level is averaged independently from the full table.
  std::vector<std::int64_t> npow(len + 1, 1);
  for (int i = 1; i <= len; ++i) npow[i] = npow[i - 1] * n;
  trace.levels.assign(len + 1, {});
  for (int i = 0; i <= len; ++i) {
    std::vector<BigRat> level(npow[i], BigRat(0));
    for (std::int64_t idx = 0; idx < grid; ++idx) level[idx % npow[i]] += fhat[idx];
    const BigRat completions(BigInt(grid / npow[i]));
    for (auto& v : level) v /= completions;
    trace.levels[i] = std::move(level);
  }

  // Martingale property: averaging the children of a prefix gives the prefix.
  trace.martingale_ok = true;
  const BigRat n_rat(n);
  for (int i = 1; i <= len && trace.martingale_ok; ++i) {
    for (std::int64_t p = 0; p < npow[i - 1]; ++p) {
      BigRat s = 0;
      for (int v = 0; v < n; ++v) s += trace.levels[i][p + v * npow[i - 1]];
      if (s / n_rat != trace.levels[i - 1][p]) {
        trace.martingale_ok = false;
        break;
      }
    }
  }

  // Second moments of the increments, exactly.
  trace.increment_second_moments.assign(len, BigRat(0));
  for (int i = 1; i <= len; ++i) {
    BigRat s = 0;
    for (std::int64_t p = 0; p < npow[i]; ++p) {
      const BigRat d = trace.levels[i][p] - trace.levels[i - 1][p % npow[i - 1]];
      s += d * d;
    }
    trace.increment_second_moments[i - 1] = s / BigRat(BigInt(npow[i]));
  }

  const BigRat mean = trace.levels[0][0];
  BigRat sumsq = 0;
  for (const auto& v : fhat) sumsq += v * v;
  trace.variance = sumsq / BigRat(BigInt(grid)) - mean * mean;

  BigRat total_inc = 0;
  for (const auto& m : trace.increment_second_moments) total_inc += m;
  trace.telescope_ok = (total_inc == trace.variance);
  return trace;
}

LipschitzReport check_lipschitz_superposable(const std::string& name,
                                             const std::function<double(const LabelledTree&)>& f,
                                             int n, long long trials, double alpha, double rho,
                                             SeedSpec seed) {
  if (n < 3) throw std::invalid_argument("perturbation audit requires n >= 3");
  RngStream rng(seed);
  LipschitzReport rep;
  rep.parameter = name;
  rep.n = n;
  rep.trials = trials;

  const auto record = [&rep](const std::string& line) {
    if (rep.examples.size() < 5) rep.examples.push_back(line);
  };

  for (long long trial = 0; trial < trials; ++trial) {
    const LabelledTree t = sample_uniform(n, rng);
    const double ft = f(t);

    const auto draw_move = [&]() {
      const auto& e = t.edges()[rng.uniform_below(t.edges().size())];
      const bool flip = rng.uniform_below(2) == 1;
      Perturbation m;
      m.i = flip ? e.second : e.first;
      m.j = flip ? e.first : e.second;
      m.k = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
      return m;
    };

    const Perturbation m1 = draw_move();
    if (!perturbation_valid(t, m1)) continue;
    const LabelledTree t1 = perturb(t, m1);
    const double d1 = f(t1) - ft;
    ++rep.single_tested;
    rep.max_abs_delta = std::max(rep.max_abs_delta, std::abs(d1));
    if (std::abs(d1) > alpha + 1e-9) {
      ++rep.lipschitz_violations;
      std::ostringstream os;
      os << "single move (" << m1.i << "," << m1.j << "," << m1.k << ") on " << to_text(t)
         << " changes " << name << " by " << d1;
      record(os.str());
    }

    const Perturbation m2 = draw_move();
    if (!perturbation_valid(t, m2)) continue;
    const LabelledTree t2 = perturb(t, m2);
    if (!perturbation_valid(t2, m1)) continue;  // composite must stay a tree
    if (static_cast<double>(distance(t, {m1.j, m1.k}, {m2.j, m2.k})) < rho) continue;
    const double d2 = f(t2) - ft;
    const double both = f(perturb(t2, m1)) - ft;
    ++rep.pairs_tested;
    const double err = std::abs(both - d1 - d2);
    rep.max_superposition_error = std::max(rep.max_superposition_error, err);
    if (err > 1e-9) {
      ++rep.superposition_violations;
      std::ostringstream os;
      os << "moves (" << m1.i << "," << m1.j << "," << m1.k << ") and (" << m2.i << "," << m2.j
         << "," << m2.k << ") on " << to_text(t) << ": combined " << both << " vs "
         << (d1 + d2);
      record(os.str());
    }
  }
  return rep;
}

ExactParameter exact_leaf_count() {
  return {"leaves", [](const LabelledTree& t) { return BigRat(degree_count(t, 1)); }};
}

ExactParameter exact_degree_count(int d) {
  return {"degree-count-" + std::to_string(d),
          [d](const LabelledTree& t) { return BigRat(degree_count(t, d)); }};
}

ExactParameter exact_max_degree() {
  return {"max-degree", [](const LabelledTree& t) { return BigRat(max_degree(t)); }};
}

ExactParameter exact_path_count(int l) {
  return {"path-count-" + std::to_string(l),
          [l](const LabelledTree& t) { return BigRat(static_cast<long>(path_count(t, l))); }};
}

ExactParameter exact_pattern_count(const Pattern& p) {
  return {"pattern-count",
          [p](const LabelledTree& t) { return BigRat(static_cast<long>(pattern_count(t, p))); }};
}

ExactParameter exact_edge_indicator(int u, int v) {
  return {"edge-indicator-" + std::to_string(u) + "-" + std::to_string(v),
          [u, v](const LabelledTree& t) {
            if (u < 1 || u > t.n() || v < 1 || v > t.n()) {
              throw std::invalid_argument("label out of range in edge indicator");
            }
            return BigRat(t.has_edge(u, v) ? 1 : 0);
          }};
}

}  // namespace treelab
