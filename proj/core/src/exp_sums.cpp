#include "cuspsieve/exp_sums.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "fftw_lock.hpp"

namespace cuspsieve {

using detail::fftw_planner_mutex;

namespace {

__extension__ typedef unsigned __int128 u128;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t resolve_lower(std::uint64_t N, double lower_cutoff) {
  if (lower_cutoff > 0) return static_cast<std::uint64_t>(std::ceil(lower_cutoff));
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(N)));
  while (r * r < N) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= N) --r;
  return r;
}

template <class Keep>
PrimeSubset make_subset(const PrimeContext& ctx, std::uint64_t N, double lower_cutoff,
                        SubsetKind kind, Keep&& keep) {
  if (N < 100) throw std::domain_error("prime subset: N must be >= 100");
  if (N > ctx.limit()) throw std::out_of_range("prime subset: N beyond the prime table");
  PrimeSubset s;
  s.N = N;
  s.kind = kind;
  s.lower = resolve_lower(N, lower_cutoff);
  for (const auto p : ctx.primes()) {
    if (p > N) break;
    if (p >= s.lower && keep(p)) s.members.push_back(p);
  }
  if (s.members.empty()) throw std::domain_error("prime subset: empty subset");
  s.K = static_cast<double>(N) / (s.T0() * std::log(static_cast<double>(N)));
  return s;
}

cplx unit(long double phase) {
  const double t = kTwoPi * static_cast<double>(phase);
  return {std::cos(t), std::sin(t)};
}

}  // namespace

std::string_view to_string(SubsetKind k) {
  switch (k) {
    case SubsetKind::full: return "full";
    case SubsetKind::sqrt2: return "sqrt2";
    case SubsetKind::random: return "random";
  }
  return "?";
}

bool PrimeSubset::contains(std::uint64_t p) const {
  return std::binary_search(members.begin(), members.end(), p);
}

bool sqrt2_member(std::uint64_t p) {
  // k = floor(p sqrt 2); {p sqrt 2} <= 1/2 iff 2 p^2 <= (k + 1/2)^2 iff 8 p^2 <= (2k + 1)^2.
  const u128 two_p2 = static_cast<u128>(2) * p * p;
  auto k = static_cast<u128>(std::sqrt(static_cast<long double>(two_p2)));
  while (k * k > two_p2) --k;
  while ((k + 1) * (k + 1) <= two_p2) ++k;
  return 4 * two_p2 <= (2 * k + 1) * (2 * k + 1);
}

PrimeSubset subset_full(const PrimeContext& ctx, std::uint64_t N, double lower_cutoff) {
  return make_subset(ctx, N, lower_cutoff, SubsetKind::full, [](std::uint64_t) { return true; });
}

PrimeSubset subset_sqrt2(const PrimeContext& ctx, std::uint64_t N, double lower_cutoff) {
  return make_subset(ctx, N, lower_cutoff, SubsetKind::sqrt2, sqrt2_member);
}

PrimeSubset subset_random(const PrimeContext& ctx, std::uint64_t N, double density,
                          std::uint64_t seed, double lower_cutoff) {
  if (!(density > 0.0 && density <= 1.0))
    throw std::domain_error("random subset: density must lie in (0, 1]");
  std::mt19937_64 rng(seed);
  // 53 random bits per prime, independent of the standard library's distributions.
  auto s = make_subset(ctx, N, lower_cutoff, SubsetKind::random, [&](std::uint64_t) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < density;
  });
  s.density = density;
  s.seed = seed;
  return s;
}

cplx exp_sum_at(const PrimeSubset& s, double alpha) {
  const long double a = reduce_mod1(static_cast<long double>(alpha));
  double re = 0.0, im = 0.0;
  for (const auto p : s.members) {
    const long double ph = p * a;
    const cplx u = unit(ph - std::floor(ph));
    re += u.real();
    im += u.imag();
  }
  return {re, im};
}

cplx exp_sum_at(const PrimeSubset& s, std::int64_t a, std::int64_t q) {
  if (q <= 0) throw std::domain_error("exp_sum_at: q must be positive");
  const std::int64_t ar = ((a % q) + q) % q;
  double re = 0.0, im = 0.0;
  for (const auto p : s.members) {
    const auto r = static_cast<std::int64_t>(
        (static_cast<u128>(p % static_cast<std::uint64_t>(q)) *
         static_cast<std::uint64_t>(ar)) % static_cast<std::uint64_t>(q));
    const cplx u = unit(static_cast<long double>(r) / static_cast<long double>(q));
    re += u.real();
    im += u.imag();
  }
  return {re, im};
}

double exp_sum_abs(const PrimeSubset& s, double alpha) { return std::abs(exp_sum_at(s, alpha)); }

SpectrumGrid::SpectrumGrid(const PrimeSubset& s, std::uint64_t G) : G_(G), t0_(s.T0()) {
  if (G == 0 || (G & (G - 1)) != 0)
    throw std::domain_error("spectrum: grid size must be a power of two");
  if (G < s.N) throw std::domain_error("spectrum: grid size must be >= N");
  double* in = fftw_alloc_real(G);
  fftw_complex* out = fftw_alloc_complex(G / 2 + 1);
  if (in == nullptr || out == nullptr) {
    fftw_free(in);
    fftw_free(out);
    throw std::bad_alloc();
  }
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(G), in, out, FFTW_ESTIMATE);
  }
  std::fill(in, in + G, 0.0);
  for (const auto p : s.members) in[p % G] += 1.0;
  fftw_execute(plan);
  half_.resize(G / 2 + 1);
  // FFTW uses e(-jn/G); T*(j/G) is the conjugate.
  for (std::uint64_t j = 0; j <= G / 2; ++j) half_[j] = {out[j][0], -out[j][1]};
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
}

cplx SpectrumGrid::value(std::uint64_t j) const {
  j %= G_;
  if (j <= G_ / 2) return half_[j];
  return std::conj(half_[G_ - j]);
}

std::uint64_t default_grid_size(std::uint64_t N, std::uint64_t factor) {
  std::uint64_t G = 1;
  while (G < factor * N) G <<= 1;
  return G;
}

double l1_estimate(const SpectrumGrid& grid) {
  const std::uint64_t G = grid.size();
  // Conjugate symmetry: the interior of the half spectrum counts twice.
  double s = grid.abs(0) + grid.abs(G / 2);
  double inner = 0.0;
  for (std::uint64_t j = 1; j < G / 2; ++j) inner += grid.abs(j);
  s += 2.0 * inner;
  return s / static_cast<double>(G);
}

}  // namespace cuspsieve
