#include "treelab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "treelab/oracle.hpp"

namespace treelab {

namespace {

MomentReport make_report(std::string formula, BigRat exact) {
  MomentReport r;
  r.formula = std::move(formula);
  exact.canonicalize();
  r.exact = exact;
  r.exact_valid = true;
  r.value = to_double(exact);
  const int s = sgn(exact);
  if (s > 0) {
    r.log_value = log_rat(exact);
  } else if (s == 0) {
    r.log_value = -std::numeric_limits<double>::infinity();
  } else {
    r.log_value = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

// base^exp as an exact rational; exp may be negative.
BigRat pow_rat(std::int64_t base, std::int64_t exp) {
  if (base <= 0) throw std::invalid_argument("pow_rat: base must be positive");
  if (exp >= 0) return BigRat(pow_big(BigInt(static_cast<long>(base)), static_cast<unsigned long>(exp)));
  BigRat r(1, 1);
  r /= pow_big(BigInt(static_cast<long>(base)), static_cast<unsigned long>(-exp));
  return r;
}

std::vector<int> pattern_degrees(const Pattern& p) {
  std::vector<int> deg(p.l + 1, 0);
  for (const Edge& e : p.edges) {
    ++deg[e.first];
    ++deg[e.second];
  }
  return deg;
}

}  // namespace

std::string MomentReport::describe() const {
  std::ostringstream os;
  os.precision(10);
  os << formula << " = ";
  if (exact_valid) os << rat_string(exact) << " ~ ";
  os << value << " (log " << log_value << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Anchored forest counts
// ---------------------------------------------------------------------------

void validate_forest_spec(const ForestSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("forest spec: n must be >= 1");
  if (spec.components.empty()) throw std::invalid_argument("forest spec: no components");
  std::vector<char> seen(static_cast<std::size_t>(spec.n) + 1, 0);
  for (const ForestComponent& c : spec.components) {
    const int m = static_cast<int>(c.vertices.size());
    if (m < 1) throw std::invalid_argument("forest spec: empty component");
    for (int v : c.vertices) {
      if (v < 1 || v > spec.n) throw std::invalid_argument("forest spec: vertex label out of range");
      if (seen[v]) throw std::invalid_argument("forest spec: vertex label repeated");
      seen[v] = 1;
    }
    if (static_cast<int>(c.edges.size()) != m - 1)
      throw std::invalid_argument("forest spec: component must have |vertices|-1 edges");
    std::vector<std::vector<int>> adj(m + 1);
    for (const Edge& e : c.edges) {
      if (e.first < 1 || e.first > m || e.second < 1 || e.second > m || e.first == e.second)
        throw std::invalid_argument("forest spec: bad local edge");
      adj[e.first].push_back(e.second);
      adj[e.second].push_back(e.first);
    }
    // m-1 edges + connected <=> tree.
    std::vector<char> vis(m + 1, 0);
    std::vector<int> stack = {1};
    vis[1] = 1;
    int reached = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : adj[v])
        if (!vis[u]) {
          vis[u] = 1;
          ++reached;
          stack.push_back(u);
        }
    }
    if (reached != m) throw std::invalid_argument("forest spec: component edges not connected");
    if (c.anchors.empty()) throw std::invalid_argument("forest spec: component needs an anchor");
    std::vector<char> used(m + 1, 0);
    for (int pos : c.anchors) {
      if (pos < 1 || pos > m) throw std::invalid_argument("forest spec: anchor position out of range");
      if (used[pos]) throw std::invalid_argument("forest spec: anchor position repeated");
      used[pos] = 1;
    }
  }
  for (int v = 1; v <= spec.n; ++v)
    if (!seen[v]) throw std::invalid_argument("forest spec: components must cover {1..n}");
}

MomentReport forest_count_exact(const ForestSpec& spec) {
  validate_forest_spec(spec);
  const std::int64_t k = static_cast<std::int64_t>(spec.components.size());
  std::int64_t total_anchors = 0;
  BigRat r(1, 1);
  for (const ForestComponent& c : spec.components) {
    const std::int64_t b = static_cast<std::int64_t>(c.anchors.size());
    total_anchors += b;
    r *= BigInt(static_cast<long>(b));
  }
  r *= pow_rat(total_anchors, k - 2);
  return make_report("forest-count", r);
}

// ---------------------------------------------------------------------------
// Pattern moments
// ---------------------------------------------------------------------------

MomentReport pattern_expectation_exact(int n, const Pattern& p) {
  validate_pattern(p);
  if (n < 2) throw std::invalid_argument("pattern mean: n must be >= 2");
  const int l = p.l;
  if (n < l) throw std::invalid_argument("pattern mean: n must be >= pattern size");
  int s = 0;
  for (int t : p.theta) s += t;
  if (s == 0) {
    if (n == l)
      throw std::invalid_argument(
          "pattern mean: no marked vertices with n equal to the pattern size is degenerate");
    return make_report("pattern-mean-empty", BigRat(0, 1));
  }
  BigRat r(falling_factorial_big(BigInt(n), static_cast<unsigned long>(l)));
  r *= BigInt(s);
  r *= pow_rat(n - l + s, static_cast<std::int64_t>(n) - l - 1);
  r /= BigInt(static_cast<long>(pattern_aut(p)));
  r /= pow_big(BigInt(n), static_cast<unsigned long>(n - 2));
  return make_report("pattern-mean", r);
}

double pattern_expectation_log(std::int64_t n, const Pattern& p) {
  validate_pattern(p);
  if (n < 2) throw std::invalid_argument("pattern mean: n must be >= 2");
  const int l = p.l;
  if (n < l) throw std::invalid_argument("pattern mean: n must be >= pattern size");
  std::int64_t s = 0;
  for (int t : p.theta) s += t;
  if (s == 0) throw std::invalid_argument("pattern mean (log): needs at least one marked vertex");
  double lg = 0.0;
  for (int i = 0; i < l; ++i) lg += std::log(static_cast<double>(n - i));
  lg += std::log(static_cast<double>(s));
  lg += static_cast<double>(n - l - 1) * std::log(static_cast<double>(n - l + s));
  lg -= std::log(static_cast<double>(pattern_aut(p)));
  lg -= static_cast<double>(n - 2) * std::log(static_cast<double>(n));
  return lg;
}

MomentReport conditional_pattern_expectation(const std::vector<int>& x, const Pattern& p) {
  validate_pattern(p);
  const int n = static_cast<int>(x.size());
  if (n < 2) throw std::invalid_argument("conditional pattern mean: need n >= 2");
  const int l = p.l;
  if (l > n - 1)
    throw std::invalid_argument("conditional pattern mean: requires pattern size <= n - 1");
  std::int64_t sum_x = 0;
  for (int v : x) {
    if (v < 0) throw std::invalid_argument("conditional pattern mean: negative degree offset");
    sum_x += v;
  }
  if (sum_x != static_cast<std::int64_t>(n) - 2)
    throw std::invalid_argument("conditional pattern mean: offsets must sum to n - 2");

  const std::vector<int> h = pattern_degrees(p);
  int max_h = 0;
  for (int i = 1; i <= l; ++i) max_h = std::max(max_h, h[i]);

  // F[v][d] = (x_v)_d for the falling-factorial amounts the formula needs.
  std::vector<std::vector<BigInt>> F(n + 1, std::vector<BigInt>(max_h + 1));
  for (int v = 1; v <= n; ++v)
    for (int d = 0; d <= max_h; ++d)
      F[v][d] = falling_factorial_big(BigInt(x[v - 1]), static_cast<unsigned long>(d));

  BigInt total = 0;
  std::vector<int> u(l + 1, 0);
  std::vector<char> used(n + 1, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i > l) {
      for (int up = 1; up <= l; ++up) {
        BigInt term = F[u[up]][h[up]];
        for (int j = 1; j <= l; ++j)
          if (j != up) term *= F[u[j]][h[j] - 1];
        total += term;
      }
      return;
    }
    for (int v = 1; v <= n; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      u[i] = v;
      rec(i + 1);
      used[v] = 0;
    }
  };
  rec(1);

  // All-marked copy of H: its automorphism count is |Aut H| of the plain tree.
  Pattern unmarked{p.l, p.edges, std::vector<int>(p.l, 1)};
  BigRat r(total);
  r /= falling_factorial_big(BigInt(n - 2), static_cast<unsigned long>(l - 1));
  r /= BigInt(static_cast<long>(pattern_aut(unmarked)));
  return make_report("pattern-mean-conditional", r);
}

// ---------------------------------------------------------------------------
// Path count moments
// ---------------------------------------------------------------------------

MomentReport path_variance_leading(std::int64_t n, int l) {
  if (n < 1) throw std::invalid_argument("path variance: n must be >= 1");
  if (l < 3) throw std::invalid_argument("path variance: l must be >= 3");
  BigRat r(BigInt(static_cast<long>(n)));
  r *= BigInt(l);
  r *= BigInt(l - 1) * BigInt(l - 1);
  r *= BigInt(l - 2);
  r /= BigInt(24);
  return make_report("path-variance-leading", r);
}

std::pair<BigRat, BigRat> path_variance_identity(int l) {
  if (l < 2) throw std::invalid_argument("path variance identity: l must be >= 2");
  const BigInt L(l);
  BigInt lhs = -(L * L) * (L - 1) * (L - 1);
  for (int i = 2; i <= l; ++i) {
    const BigInt a(l - i + 1);
    lhs += 2 * a * a * BigInt(2 * l - i);
  }
  const BigInt rhs_num = L * (L - 1) * (L - 1) * (L - 2);
  BigRat rhs(rhs_num);
  rhs /= BigInt(6);
  rhs.canonicalize();
  return {BigRat(lhs), rhs};
}

// ---------------------------------------------------------------------------
// Degree-sequence (multinomial) moments
// ---------------------------------------------------------------------------

MomentReport multinomial_factorial_moment(int n, const std::vector<int>& a,
                                          const std::vector<int>& b) {
  if (n < 2) throw std::invalid_argument("multinomial moment: n must be >= 2");
  if (a.size() > static_cast<std::size_t>(n) || b.size() > static_cast<std::size_t>(n))
    throw std::invalid_argument("multinomial moment: exponent vectors longer than n");
  const std::size_t m = std::max(a.size(), b.size());
  std::int64_t A = 0, B = 0;
  std::vector<std::pair<int, int>> active;  // (a_i, b_i) with min > 0
  for (std::size_t i = 0; i < m; ++i) {
    const int ai = i < a.size() ? a[i] : 0;
    const int bi = i < b.size() ? b[i] : 0;
    if (ai < 0 || bi < 0) throw std::invalid_argument("multinomial moment: negative exponent");
    A += ai;
    B += bi;
    if (std::min(ai, bi) > 0) active.emplace_back(ai, bi);
  }

  BigRat total(0, 1);
  std::function<void(std::size_t, std::int64_t, BigInt)> rec = [&](std::size_t idx, std::int64_t J,
                                                                   BigInt coeff) {
    if (idx == active.size()) {
      const std::int64_t e = A + B - J;
      BigRat term(coeff * falling_factorial_big(BigInt(n - 2), static_cast<unsigned long>(e)));
      term /= pow_big(BigInt(n), static_cast<unsigned long>(e));
      total += term;
      return;
    }
    const auto [ai, bi] = active[idx];
    for (int j = 0; j <= std::min(ai, bi); ++j) {
      BigInt c = coeff * factorial_big(static_cast<unsigned long>(j)) *
                 binomial_big(static_cast<unsigned long>(ai), static_cast<unsigned long>(j)) *
                 binomial_big(static_cast<unsigned long>(bi), static_cast<unsigned long>(j));
      rec(idx + 1, J + j, std::move(c));
    }
  };
  rec(0, 0, BigInt(1));
  return make_report("degree-multinomial-moment", total);
}

// ---------------------------------------------------------------------------
// Branch moments
// ---------------------------------------------------------------------------

MomentReport branch_factorial_moment(int n, const BranchShape& b, unsigned k, bool at_root) {
  if (n < 2) throw std::invalid_argument("branch moment: n must be >= 2");
  if (b.size < 1) throw std::invalid_argument("branch moment: empty shape");
  const char* id = at_root ? "branch-moment-root" : "branch-moment";
  if (k == 0) return make_report(id, BigRat(1, 1));
  const std::int64_t bk = static_cast<std::int64_t>(b.size) * k;
  if (bk >= n) throw std::invalid_argument("branch moment: requires |B| * k < n");
  BigRat r(falling_factorial_big(BigInt(at_root ? n - 1 : n - 2), static_cast<unsigned long>(bk)));
  r *= pow_big(b.labellings, k);
  r *= pow_rat(n - bk, n - bk - 2);
  r /= pow_big(factorial_big(static_cast<unsigned long>(b.size)), k);
  r /= pow_big(BigInt(n), static_cast<unsigned long>(n - 2));
  return make_report(id, r);
}

double branch_factorial_moment_log(std::int64_t n, const BranchShape& b, unsigned k, bool at_root) {
  if (n < 2) throw std::invalid_argument("branch moment: n must be >= 2");
  if (b.size < 1) throw std::invalid_argument("branch moment: empty shape");
  if (k == 0) return 0.0;
  const std::int64_t bk = static_cast<std::int64_t>(b.size) * k;
  const std::int64_t top = at_root ? n - 1 : n - 2;
  if (bk >= n || bk > top)
    throw std::invalid_argument("branch moment (log): value is zero or undefined here");
  double lg = 0.0;
  for (std::int64_t t = 0; t < bk; ++t) lg += std::log(static_cast<double>(top - t));
  lg += static_cast<double>(k) * log_big(b.labellings);
  lg += static_cast<double>(n - bk - 2) * std::log(static_cast<double>(n - bk));
  lg -= static_cast<double>(k) * log_factorial(static_cast<std::uint64_t>(b.size));
  lg -= static_cast<double>(n - 2) * std::log(static_cast<double>(n));
  return lg;
}

// ---------------------------------------------------------------------------
// Poisson log-moment series and interval bounds
// ---------------------------------------------------------------------------

PoissonLogMoments poisson_log_moments(double lambda, double tail_tol) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("poisson log moments: lambda must be >= 0");
  if (!(tail_tol > 0.0)) throw std::invalid_argument("poisson log moments: tail_tol must be > 0");
  PoissonLogMoments out;
  if (lambda == 0.0) {
    out.terms = 1;
    return out;
  }
  // Term envelope h(k) = log (k+1)! + log^2 (k+1)! covers all three series.
  // For k >= max(4, 4*lambda) the envelope-weighted term ratio is below 1/2
  // (probability ratio lambda/(k+1) <= 1/4, envelope ratio <= 1.9), so the
  // discarded tail is at most twice the first omitted term.
  const auto envelope = [](int k) {
    const double lf = log_factorial(static_cast<std::uint64_t>(k) + 1);
    return lf + lf * lf;
  };
  const int k_min = std::max(4, static_cast<int>(std::ceil(4.0 * lambda)));
  double p = std::exp(-lambda);  // P[X = k]
  for (int k = 0;; ++k) {
    const double lf = log_factorial(static_cast<std::uint64_t>(k));
    out.e_log_fact += p * lf;
    out.e_log_fact_plus1 += p * log_factorial(static_cast<std::uint64_t>(k) + 1);
    out.e_log2_fact += p * lf * lf;
    const double p_next = p * lambda / (k + 1);
    const double omitted = 2.0 * p_next * envelope(k + 1);
    if (k >= k_min && omitted < tail_tol) {
      out.tail_bound = omitted;
      out.terms = k + 1;
      return out;
    }
    if (k > 100000)
      throw std::invalid_argument("poisson log moments: tail tolerance unreachable");
    p = p_next;
  }
}

PoissonLogBounds poisson_log_bounds(double lambda) {
  if (!(lambda > 0.0 && lambda < 0.37))
    throw std::invalid_argument("poisson log bounds: stated only for 0 < lambda < 0.37");
  const double el = std::exp(-lambda);
  const double log2 = std::log(2.0);
  const double log6 = std::log(6.0);
  PoissonLogBounds b;
  b.a_lower = 0.5 * el * lambda * lambda * log2;
  b.a_upper = 0.5 * (1.0 + 0.7 * lambda) * el * lambda * lambda * log2;
  b.b_lower = el * lambda * log2;
  b.b_upper = (1.0 + 2.1 * lambda) * el * lambda * log2;
  b.c_lower = el * (lambda * lambda / 2.0) * log2 * log2 + el * (lambda * lambda * lambda / 6.0) * log6 * log6;
  return b;
}

// ---------------------------------------------------------------------------
// Series over rooted shapes
// ---------------------------------------------------------------------------

namespace {

// All rooted shapes of sizes 1..s_max, generated recursively: a shape of
// size s is a sorted multiset of child shapes with total size s - 1.
std::vector<std::vector<ShapeCode>> shapes_up_to(int s_max) {
  std::vector<std::vector<ShapeCode>> by_size(s_max + 1);
  if (s_max >= 1) by_size[1] = {"()"};
  for (int s = 2; s <= s_max; ++s) {
    // Pool of candidate children in a fixed order.
    std::vector<std::pair<int, ShapeCode>> pool;
    for (int sz = 1; sz < s; ++sz)
      for (const ShapeCode& c : by_size[sz]) pool.emplace_back(sz, c);
    std::vector<ShapeCode>& out = by_size[s];
    std::vector<ShapeCode> children;
    std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int remaining) {
      if (remaining == 0) {
        std::vector<ShapeCode> sorted = children;
        std::sort(sorted.begin(), sorted.end());
        ShapeCode code = "(";
        for (const ShapeCode& c : sorted) code += c;
        code += ")";
        out.push_back(std::move(code));
        return;
      }
      if (idx == pool.size()) return;
      const int sz = pool[idx].first;
      const ShapeCode& c = pool[idx].second;
      rec(idx + 1, remaining);  // zero copies of pool[idx]
      int taken = 0;
      while ((taken + 1) * sz <= remaining) {
        ++taken;
        children.push_back(c);
        rec(idx + 1, remaining - taken * sz);
      }
      children.resize(children.size() - taken);
    };
    rec(0, s - 1);
    std::sort(out.begin(), out.end());
  }
  return by_size;
}

}  // namespace

std::vector<ShapeCode> rooted_shapes_of_size(int size, const std::string& method) {
  if (size < 1) throw std::invalid_argument("rooted shapes: size must be >= 1");
  if (method == "direct") {
    return shapes_up_to(size)[size];
  }
  if (method == "labelled-aggregation") {
    if (size > 9)
      throw std::invalid_argument("rooted shapes: labelled-aggregation is limited to size <= 9");
    if (size == 1) return {"()"};
    std::vector<ShapeCode> out;
    enumerate_trees(size, [&](const LabelledTree& t) {
      for (int r = 1; r <= size; ++r) out.push_back(canonical_code(t, r));
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  throw std::invalid_argument("rooted shapes: unknown method '" + method + "'");
}

LambdaSeriesReport lambda_series(int s_max, std::optional<std::int64_t> n) {
  if (s_max < 1) throw std::invalid_argument("lambda series: s_max must be >= 1");
  if (n && (*n < 2 || *n < s_max))
    throw std::invalid_argument("lambda series: finite n must be >= max(2, s_max)");
  LambdaSeriesReport rep;
  rep.s_max = s_max;
  rep.method = "direct";
  const auto by_size = shapes_up_to(s_max);
  for (int s = 1; s <= s_max; ++s) {
    rep.shapes_per_size.push_back(static_cast<std::int64_t>(by_size[s].size()));
    for (const ShapeCode& code : by_size[s]) {
      const BranchShape b = branch_shape_from_code(code);
      const double lam = lambda_branch(b, n);
      const double w = lam * lam * std::exp(-lam);
      rep.s0 += w;
      rep.s1 += w * s;
      rep.s2 += w * s * s;
    }
  }
  // Tail: sum over |B| = s of lambda_B^2 e^{-lambda_B} s^j is at most
  // s^{s+j-1} e^{-2s} e^{s/n} / s!  (lambda_B <= e^{-s} e^{s/2n} since
  // L(B) <= |B|!, and the lambda_B over shapes of size s sum to
  // s^{s-1} e^{-s} e^{s/2n} / s!). Successive terms shrink by at least
  // (1 + 1/s)^j e^{-1 + 1/n}, so close with a geometric series once that
  // ratio drops below 0.9.
  const double inv_n = n ? 1.0 / static_cast<double>(*n) : 0.0;
  const auto term = [&](int s, int j) {
    return std::exp((s + j - 1) * std::log(static_cast<double>(s)) - 2.0 * s + s * inv_n -
                    log_factorial(static_cast<std::uint64_t>(s)));
  };
  const auto tail = [&](int j) {
    double bound = 0.0;
    for (int s = s_max + 1;; ++s) {
      const double ratio = std::pow(1.0 + 1.0 / s, j) * std::exp(-1.0 + inv_n);
      if (ratio < 0.9) {
        bound += term(s, j) / (1.0 - ratio);
        return bound;
      }
      bound += term(s, j);
    }
  };
  rep.tail0 = tail(0);
  rep.tail1 = tail(1);
  rep.tail2 = tail(2);
  return rep;
}

}  // namespace treelab
