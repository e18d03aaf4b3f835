#include "cuspsieve/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "cuspsieve/errors.hpp"

namespace cuspsieve {

PrimeContext::PrimeContext(std::uint64_t limit, std::uint64_t max_limit)
    : limit_(limit) {
  if (limit < 2) throw std::invalid_argument("PrimeContext: limit must be >= 2");
  if (limit > max_limit || limit > std::numeric_limits<std::uint32_t>::max()) {
    throw capacity_error("PrimeContext: limit " + std::to_string(limit) +
                         " exceeds the configured cap " +
                         std::to_string(max_limit));
  }
  spf_.assign(limit + 1, 0);
  // Linear sieve: every composite is struck exactly once by its least prime.
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
    }
    const std::uint32_t lp = spf_[i];
    for (const std::uint32_t p : primes_) {
      if (p > lp) break;
      const std::uint64_t m = static_cast<std::uint64_t>(p) * i;
      if (m > limit) break;
      spf_[m] = p;
    }
  }
}

void PrimeContext::check_range(std::uint64_t n) const {
  if (n < 1 || n > limit_) {
    throw std::out_of_range("PrimeContext: argument " + std::to_string(n) +
                            " outside [1, " + std::to_string(limit_) + "]");
  }
}

bool PrimeContext::is_prime(std::uint64_t n) const {
  if (n < 2) return false;
  check_range(n);
  return spf_[n] == n;
}

std::uint64_t PrimeContext::spf(std::uint64_t n) const {
  check_range(n);
  if (n < 2) throw std::out_of_range("PrimeContext::spf: n must be >= 2");
  return spf_[n];
}

std::uint64_t PrimeContext::prime_count(std::uint64_t x) const {
  if (x > limit_) throw std::out_of_range("PrimeContext::prime_count: x > limit");
  return static_cast<std::uint64_t>(
      std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

Factorization PrimeContext::factor(std::uint64_t n) const {
  check_range(n);
  Factorization f;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    std::uint8_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.primes[f.count] = p;
    f.exponents[f.count] = e;
    ++f.count;
  }
  return f;
}

int PrimeContext::mobius(std::uint64_t n) const {
  const Factorization f = factor(n);
  if (!f.squarefree()) return 0;
  return (f.count % 2 == 0) ? 1 : -1;
}

std::uint64_t PrimeContext::euler_phi(std::uint64_t n) const {
  const Factorization f = factor(n);
  std::uint64_t phi = n;
  for (int i = 0; i < f.count; ++i) phi = phi / f.primes[i] * (f.primes[i] - 1);
  return phi;
}

bool PrimeContext::squarefree(std::uint64_t n) const {
  return factor(n).squarefree();
}

std::vector<std::uint64_t> segmented_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  std::vector<char> small(root + 1, 1);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
  }
  constexpr std::uint64_t kSegment = 1 << 18;
  std::vector<char> seg(kSegment);
  for (std::uint64_t lo = 2; lo <= limit; lo += kSegment) {
    const std::uint64_t hi = std::min(limit, lo + kSegment - 1);
    std::fill(seg.begin(), seg.end(), 1);
    for (const std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j <= hi; j += p) seg[j - lo] = 0;
    }
    for (std::uint64_t n = lo; n <= hi; ++n)
      if (seg[n - lo]) out.push_back(n);
  }
  return out;
}

std::uint64_t segmented_prime_count(std::uint64_t limit) {
  return segmented_primes(limit).size();
}

Factorization trial_factor(std::uint64_t n) {
  Factorization f;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    std::uint8_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.primes[f.count] = p;
    f.exponents[f.count] = e;
    ++f.count;
  }
  if (n > 1) {
    f.primes[f.count] = n;
    f.exponents[f.count] = 1;
    ++f.count;
  }
  return f;
}

std::int64_t ramanujan_sum(const PrimeContext& ctx, std::uint64_t q,
                           std::uint64_t n) {
  if (q < 1) throw std::out_of_range("ramanujan_sum: q must be >= 1");
  const std::uint64_t g = std::gcd(q, n);  // gcd(q, 0) = q
  const std::uint64_t r = q / g;
  const int mu = ctx.mobius(r);
  if (mu == 0) return 0;
  return mu * static_cast<std::int64_t>(ctx.euler_phi(q) / ctx.euler_phi(r));
}

std::int64_t ramanujan_sum_squarefree(std::span<const std::uint64_t> q_primes,
                                      std::uint64_t n) {
  // Multiplicative: c_p(n) = p - 1 if p | n, else -1.
  std::int64_t c = 1;
  for (const std::uint64_t p : q_primes)
    c *= (n % p == 0) ? static_cast<std::int64_t>(p - 1) : -1;
  return c;
}

std::vector<std::uint64_t> primes_below(const PrimeContext& ctx, double z0) {
  std::vector<std::uint64_t> out;
  for (const std::uint32_t p : ctx.primes()) {
    if (static_cast<double>(p) >= z0) break;
    out.push_back(p);
  }
  if (z0 > static_cast<double>(ctx.limit()) + 1.0)
    throw std::out_of_range("primes_below: z0 beyond the prime table");
  return out;
}

mpz_class primorial(const PrimeContext& ctx, double z0) {
  mpz_class prod = 1;
  for (const std::uint64_t p : primes_below(ctx, z0)) prod *= static_cast<unsigned long>(p);
  return prod;
}

mpq_class mertens_product(const PrimeContext& ctx, double z0) {
  mpz_class num = 1;
  mpz_class den = 1;
  for (const std::uint64_t p : primes_below(ctx, z0)) {
    num *= static_cast<unsigned long>(p - 1);
    den *= static_cast<unsigned long>(p);
  }
  mpq_class v(num, den);
  v.canonicalize();
  return v;
}

double mertens_product_float(const PrimeContext& ctx, double z0) {
  double v = 1.0;
  for (const std::uint64_t p : primes_below(ctx, z0))
    v *= 1.0 - 1.0 / static_cast<double>(p);
  return v;
}

std::vector<FareyPoint> farey_points(std::uint64_t Q) {
  std::vector<FareyPoint> out;
  if (Q < 1) return out;
  // Next-term recurrence of the Farey sequence of order Q, stopped before 1/1.
  std::int64_t a = 0, b = 1, c = 1, d = static_cast<std::int64_t>(Q);
  const auto order = static_cast<std::int64_t>(Q);
  out.push_back({0, 1});
  while (c < d) {
    out.push_back({c, d});
    const std::int64_t k = (order + b) / d;
    const std::int64_t next_c = k * c - a;
    const std::int64_t next_d = k * d - b;
    a = c;
    b = d;
    c = next_c;
    d = next_d;
  }
  return out;
}

std::vector<std::uint64_t> squarefree_coprime(const PrimeContext& ctx,
                                              std::uint64_t limit,
                                              std::uint64_t m) {
  std::vector<std::uint64_t> out;
  if (limit >= 1) out.push_back(1);
  for (std::uint64_t q = 2; q <= limit; ++q) {
    if (std::gcd(q, m) != 1) continue;
    if (ctx.squarefree(q)) out.push_back(q);
  }
  return out;
}

double reduce_mod1(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

long double reduce_mod1(long double x) {
  long double r = x - std::floor(x);
  if (r >= 1.0L) r = 0.0L;
  return r;
}

double dist_to_int(double x) { return std::abs(x - std::nearbyint(x)); }

double circle_distance(double x, double y) { return dist_to_int(x - y); }

std::vector<WeightedPoint> extract_well_spaced(
    std::span<const WeightedPoint> points, double delta) {
  if (!(delta > 0.0) || delta > 0.5)
    throw std::invalid_argument("extract_well_spaced: delta must lie in (0, 1/2]");
  std::vector<WeightedPoint> order(points.begin(), points.end());
  for (auto& p : order) p.position = reduce_mod1(p.position);
  std::stable_sort(order.begin(), order.end(),
                   [](const WeightedPoint& l, const WeightedPoint& r) {
                     if (l.weight != r.weight) return l.weight > r.weight;
                     return l.position < r.position;
                   });
  std::vector<WeightedPoint> chosen;
  std::set<double> taken;
  auto too_close = [&](double x) {
    if (taken.empty()) return false;
    auto it = taken.lower_bound(x);
    const double after = (it == taken.end()) ? *taken.begin() : *it;
    const double before = (it == taken.begin()) ? *taken.rbegin() : *std::prev(it);
    return circle_distance(x, after) < delta || circle_distance(x, before) < delta;
  };
  for (const auto& p : order) {
    if (too_close(p.position)) continue;
    taken.insert(p.position);
    chosen.push_back(p);
  }
  return chosen;
}

double min_circle_gap(std::span<const double> positions) {
  if (positions.size() < 2) return std::numeric_limits<double>::infinity();
  std::vector<double> sorted;
  sorted.reserve(positions.size());
  for (const double x : positions) sorted.push_back(reduce_mod1(x));
  std::sort(sorted.begin(), sorted.end());
  double gap = circle_distance(sorted.front(), sorted.back());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    gap = std::min(gap, circle_distance(sorted[i], sorted[i - 1]));
  return gap;
}

double min_circle_gap(std::span<const WeightedPoint> points) {
  std::vector<double> xs;
  xs.reserve(points.size());
  for (const auto& p : points) xs.push_back(p.position);
  return min_circle_gap(std::span<const double>(xs));
}

}  // namespace cuspsieve
