#pragma once
// Shared numeric utilities: a small counter-based RNG with independent
// per-stream substreams, exact big-integer/rational helpers on top of GMP,
// and the special functions used by the statistical harness (normal CDF,
// chi-squared tail probabilities, cached log-factorials).

#include <cstdint>
#include <gmpxx.h>
#include <string>

namespace treelab {

using BigInt = mpz_class;
using BigRat = mpq_class;

// ---------------------------------------------------------------------------
// Random number generation
// ---------------------------------------------------------------------------

// Identifies one reproducible random stream: a master seed plus a stream
// (replicate) index. Distinct indices give statistically independent streams,
// so replicate i of an experiment always sees the same draws no matter how
// replicates are scheduled across threads.
struct SeedSpec {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;
};

// SplitMix64 finalizer (Stafford mix13 variant). Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Counter-based SplitMix64 stream. The initial counter is derived injectively
// from (master, stream), after which each draw advances the counter by the
// 64-bit golden ratio and applies mix64. All draws are pure functions of
// (master, stream, draw index).
class RngStream {
 public:
  explicit RngStream(SeedSpec spec) noexcept;

  std::uint64_t next_u64() noexcept;

  // Uniform on {0, 1, ..., bound-1}, exactly (Lemire multiply-shift with
  // rejection of the biased slice). bound must be nonzero.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;

  // Uniform label from {1, ..., n}.
  int uniform_label(int n) noexcept { return 1 + static_cast<int>(uniform_below(static_cast<std::uint64_t>(n))); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() noexcept;

  // Standard normal via the Box-Muller transform (used by test utilities).
  double next_normal() noexcept;

 private:
  std::uint64_t counter_;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

// Standard normal CDF. Evaluated as erfc(-t / sqrt(2)) / 2; std::erfc is
// correctly rounded to a few ulp, far below the 1e-10 absolute accuracy this
// library documents for distributional comparisons.
double normal_cdf(double t) noexcept;

// Upper tail P(X >= x) of a chi-squared random variable with `dof` degrees of
// freedom, i.e. the regularized upper incomplete gamma Q(dof/2, x/2).
// Implemented with the classic series / continued-fraction split.
double chi_squared_tail(double x, double dof);

// Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

// log(n!) in double precision. Values below a fixed cutoff come from a
// lazily built table of exact factorials converted to log at the end; larger
// arguments use std::lgamma (few-ulp accuracy).
double log_factorial(std::uint64_t n);

// ---------------------------------------------------------------------------
// Exact arithmetic helpers
// ---------------------------------------------------------------------------

BigInt factorial_big(unsigned long n);
BigInt binomial_big(unsigned long n, unsigned long k);

// Falling factorial (x)_k = x (x-1) ... (x-k+1) with exact arithmetic.
BigInt falling_factorial_big(const BigInt& x, unsigned long k);

// base^exp for exact integers, exp >= 0.
BigInt pow_big(const BigInt& base, unsigned long exp);

// Natural log of a positive big integer, in double precision.
double log_big(const BigInt& x);

// Natural log of a positive rational.
double log_rat(const BigRat& q);

// Round-to-nearest double view of an exact rational.
double to_double(const BigRat& q);

// Decimal string for diagnostics "num/den".
std::string rat_string(const BigRat& q);

}  // namespace treelab
