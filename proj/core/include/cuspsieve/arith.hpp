#pragma once

// Arithmetic substrate: prime tables, multiplicative functions, Ramanujan
// sums, primorials, Farey points and well-spaced extraction on R/Z.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace cuspsieve {

/// Distinct prime factors of an integer together with their exponents.
struct Factorization {
  static constexpr int kMaxPrimes = 15;  // 2*3*...*47 > 2^64
  std::array<std::uint64_t, kMaxPrimes> primes{};
  std::array<std::uint8_t, kMaxPrimes> exponents{};
  int count = 0;

  bool squarefree() const {
    for (int i = 0; i < count; ++i)
      if (exponents[i] > 1) return false;
    return true;
  }
  std::span<const std::uint64_t> distinct() const {
    return {primes.data(), static_cast<std::size_t>(count)};
  }
};

/// Immutable prime tables over [2, limit], built once by a smallest-prime-factor
/// sieve. Safe to share between threads after construction.
class PrimeContext {
 public:
  static constexpr std::uint64_t kDefaultMaxLimit = 200'000'000;

  /// Throws capacity_error when limit > max_limit, std::invalid_argument when limit < 2.
  explicit PrimeContext(std::uint64_t limit,
                        std::uint64_t max_limit = kDefaultMaxLimit);

  std::uint64_t limit() const { return limit_; }
  std::span<const std::uint32_t> primes() const { return primes_; }

  bool is_prime(std::uint64_t n) const;
  /// Least prime factor of n, 2 <= n <= limit.
  std::uint64_t spf(std::uint64_t n) const;
  /// pi(x) for 0 <= x <= limit.
  std::uint64_t prime_count(std::uint64_t x) const;

  Factorization factor(std::uint64_t n) const;
  int mobius(std::uint64_t n) const;
  std::uint64_t euler_phi(std::uint64_t n) const;
  bool squarefree(std::uint64_t n) const;

 private:
  void check_range(std::uint64_t n) const;

  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

/// Prime-only segmented sieve of Eratosthenes; no spf table, O(sqrt(limit))
/// working memory beyond the output. Used for limits past the spf cap and as
/// an independent second route for prime counts.
std::vector<std::uint64_t> segmented_primes(std::uint64_t limit);
std::uint64_t segmented_prime_count(std::uint64_t limit);

/// Factorization by trial division, independent of any table.
Factorization trial_factor(std::uint64_t n);

/// c_q(n) = mu(q/g) phi(q) / phi(q/g), g = gcd(q, n). Requires q <= ctx.limit().
std::int64_t ramanujan_sum(const PrimeContext& ctx, std::uint64_t q,
                           std::uint64_t n);

/// c_q(n) for squarefree q given by its distinct primes; no table lookups.
std::int64_t ramanujan_sum_squarefree(std::span<const std::uint64_t> q_primes,
                                      std::uint64_t n);

/// P(z0) = product of primes p < z0.
mpz_class primorial(const PrimeContext& ctx, double z0);
/// V(z0) = prod_{p < z0} (1 - 1/p), exact.
mpq_class mertens_product(const PrimeContext& ctx, double z0);
double mertens_product_float(const PrimeContext& ctx, double z0);
/// Primes p < z0 (the support of P(z0)).
std::vector<std::uint64_t> primes_below(const PrimeContext& ctx, double z0);

/// Reduced fraction a/q with 0 <= a < q, gcd(a, q) = 1.
struct FareyPoint {
  std::int64_t a = 0;
  std::int64_t q = 1;

  mpq_class exact() const { return mpq_class(a, q); }
  double position() const {
    return static_cast<double>(a) / static_cast<double>(q);
  }
  friend bool operator==(const FareyPoint&, const FareyPoint&) = default;
};

/// All reduced fractions in [0, 1) with denominator <= Q, ascending.
std::vector<FareyPoint> farey_points(std::uint64_t Q);

/// Squarefree q <= limit with gcd(q, m) = 1, ascending.
std::vector<std::uint64_t> squarefree_coprime(const PrimeContext& ctx,
                                              std::uint64_t limit,
                                              std::uint64_t m);

/// A point of R/Z with a non-negative weight.
struct WeightedPoint {
  double position = 0.0;  // in [0, 1)
  double weight = 0.0;
};

/// x mod 1 in [0, 1).
double reduce_mod1(double x);
long double reduce_mod1(long double x);
/// |x - y|_Z, the distance on R/Z.
double circle_distance(double x, double y);
/// ||x||, distance to the nearest integer.
double dist_to_int(double x);

/// Greedy selection by descending weight (ties: smaller position first).
/// Returned points are pairwise at circle distance >= delta, and every
/// rejected point lies within delta of a selected one.
std::vector<WeightedPoint> extract_well_spaced(
    std::span<const WeightedPoint> points, double delta);

/// min over pairs of the circle distance; +inf for fewer than two points.
double min_circle_gap(std::span<const WeightedPoint> points);
double min_circle_gap(std::span<const double> positions);

}  // namespace cuspsieve
