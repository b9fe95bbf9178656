#include "treelab/numeric.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace treelab {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

RngStream::RngStream(SeedSpec spec) noexcept
    // (master, stream) -> counter is injective for fixed master; mix64 is a
    // bijection, so distinct streams start at well-separated counters.
    : counter_(mix64(spec.master + kGolden * (spec.stream + 1))) {}

std::uint64_t RngStream::next_u64() noexcept {
  counter_ += kGolden;
  return mix64(counter_);
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) noexcept {
  // Lemire multiply-shift. The low word classifies draws into equal-size
  // buckets; rejecting l < 2^64 mod bound leaves every residue exactly
  // floor(2^64 / bound) preimages, hence exact uniformity.
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::next_double() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_normal() noexcept {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = next_double();
  while (u1 <= 0.0) u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 6.283185307179586477 * u2;
  cached_normal_ = r * std::sin(theta);
  have_cached_normal_ = true;
  return r * std::cos(theta);
}

double normal_cdf(double t) noexcept { return 0.5 * std::erfc(-t / 1.4142135623730950488); }

namespace {

// Lower regularized gamma P(a, x) by power series, for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a, x) by modified Lentz continued fraction,
// for x >= a + 1.
double gamma_q_contfrac(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("regularized_gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

double chi_squared_tail(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(dof / 2.0, x / 2.0);
}

double log_factorial(std::uint64_t n) {
  // Table of log(k!) for k < kCutoff, each entry the log of the exact
  // integer factorial (so no error accumulates across the products).
  constexpr std::uint64_t kCutoff = 4096;
  static std::vector<double> table;
  static std::once_flag flag;
  std::call_once(flag, [] {
    table.resize(kCutoff);
    BigInt f = 1;
    table[0] = 0.0;
    for (std::uint64_t k = 1; k < kCutoff; ++k) {
      f *= static_cast<unsigned long>(k);
      table[k] = log_big(f);
    }
  });
  if (n < kCutoff) return table[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

BigInt factorial_big(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

BigInt binomial_big(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

BigInt falling_factorial_big(const BigInt& x, unsigned long k) {
  BigInt r = 1;
  BigInt term = x;
  for (unsigned long i = 0; i < k; ++i) {
    r *= term;
    term -= 1;
  }
  return r;
}

BigInt pow_big(const BigInt& base, unsigned long exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

double log_big(const BigInt& x) {
  if (x <= 0) throw std::invalid_argument("log_big: argument must be positive");
  signed long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * 0.69314718055994530942;
}

double log_rat(const BigRat& q) {
  if (q <= 0) throw std::invalid_argument("log_rat: argument must be positive");
  return log_big(q.get_num()) - log_big(q.get_den());
}

double to_double(const BigRat& q) { return mpq_get_d(q.get_mpq_t()); }

std::string rat_string(const BigRat& q) {
  BigRat c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

}  // namespace treelab
