#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <random>
#include <string>

#include "cuspsieve/cusps.hpp"
#include "cuspsieve/errors.hpp"
#include "cuspsieve/parallel.hpp"
#include "fftw_lock.hpp"

namespace cuspsieve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm2(std::span<const cplx> u) {
  double s = 0.0;
  for (const auto& x : u) s += std::norm(x);
  return s;
}

// sum_{a mod* m} |sum_n u_n e(n a / m)|^2 with u[n-1] = u_n, via one length-m DFT
// of the residues of u folded modulo m.
double coprime_energy(std::span<const cplx> u, std::uint64_t m) {
  if (m == 1) return std::norm(std::accumulate(u.begin(), u.end(), cplx{}));
  auto* buf = fftw_alloc_complex(m);
  if (buf == nullptr) throw std::bad_alloc();
  std::fill(reinterpret_cast<double*>(buf), reinterpret_cast<double*>(buf) + 2 * m, 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto r = (i + 1) % m;
    buf[r][0] += u[i].real();
    buf[r][1] += u[i].imag();
  }
  fftw_plan plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(m), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  double s = 0.0;
  for (std::uint64_t a = 1; a < m; ++a)
    if (std::gcd(a, m) == 1) s += buf[a][0] * buf[a][0] + buf[a][1] * buf[a][1];
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return s;
}

cplx weighted_sum(std::span<const std::uint64_t> primes, std::span<const cplx> coef, double x) {
  const long double xr = reduce_mod1(static_cast<long double>(x));
  cplx acc{};
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const long double ph = primes[i] * xr;
    const double t = kTwoPi * static_cast<double>(ph - std::floor(ph));
    acc += coef[i] * cplx{std::cos(t), std::sin(t)};
  }
  return acc;
}

}  // namespace

bool LargeSieveResult::levels_ok() const {
  for (std::size_t i = 0; i < level_A.size(); ++i)
    if (static_cast<double>(level_count[i]) > level_bound[i]) return false;
  return true;
}

LargeSieveResult large_sieve_check(const PrimeContext& ctx, std::span<const double> points,
                                   std::span<const cplx> u, const PrimeSubset& s, double delta,
                                   std::span<const cplx> f) {
  if (s.N < 10'000) throw precondition_error("large sieve: needs N >= 1e4");
  if (u.size() != s.members.size())
    throw std::invalid_argument("large sieve: one coefficient per subset prime");
  if (points.empty()) throw precondition_error("large sieve: empty point set");
  if (!(delta > 0.0) || (points.size() > 1 && min_circle_gap(points) < delta * (1.0 - 1e-12)))
    throw precondition_error("large sieve: points are not delta-well spaced");
  if (!f.empty() && f.size() != points.size())
    throw std::invalid_argument("large sieve: one f value per point");

  const double N = static_cast<double>(s.N);
  const double logN = std::log(N);
  const double scale = (N + 1.0 / delta) / logN;
  const double u2 = norm2(u);
  LargeSieveResult r;

  std::vector<cplx> S(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) S[i] = weighted_sum(s.members, u, points[i]);
  for (const auto& v : S) r.primal_lhs += std::norm(v);
  r.primal_rhs = 19.0 * scale * std::log(2.0 * static_cast<double>(points.size())) * u2;

  const std::span<const cplx> fx = f.empty() ? std::span<const cplx>(S) : f;
  double f1 = 0.0, f2 = 0.0;
  for (const auto& v : fx) {
    f1 += std::abs(v);
    f2 += std::norm(v);
  }
  const auto pend = std::upper_bound(ctx.primes().begin(), ctx.primes().end(), s.N);
  for (auto it = ctx.primes().begin(); it != pend; ++it) {
    const long double p = static_cast<long double>(*it);
    cplx acc{};
    for (std::size_t i = 0; i < points.size(); ++i) {
      const long double ph = p * reduce_mod1(static_cast<long double>(points[i]));
      const double t = kTwoPi * static_cast<double>(ph - std::floor(ph));
      acc += fx[i] * cplx{std::cos(t), std::sin(t)};
    }
    r.dual_lhs += std::norm(acc);
  }
  r.dual_rhs = f2 > 0.0 ? 19.0 * scale * f2 * std::log(2.0 * f1 * f1 / f2) : 0.0;

  r.V = std::sqrt(scale * u2);
  for (const double A : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    std::uint64_t c = 0;
    for (const auto& v : S)
      if (std::abs(v) >= r.V / A) ++c;
    r.level_A.push_back(A);
    r.level_count.push_back(c);
    r.level_bound.push_back(19.0 * A * A * std::log(2.0 * A));
  }
  return r;
}

SpacedModuliResult spaced_moduli_check(std::span<const cplx> u, double Q1, double Q2, std::uint64_t Delta) {
  if (!(Q1 >= 1.0 && Q2 >= Q1) || Delta == 0)
    throw std::invalid_argument("spaced moduli: needs 1 <= Q1 <= Q2 and Delta >= 1");
  SpacedModuliResult r;
  const auto qlo = static_cast<std::uint64_t>(std::ceil(Q1));
  const auto qhi = static_cast<std::uint64_t>(std::floor(Q2));
  for (std::uint64_t q = qlo; q <= qhi; ++q)
    r.lhs += coprime_energy(u, q * Delta) / static_cast<double>(q);
  r.rhs = (static_cast<double>(u.size()) / Q1 + 2.0 * static_cast<double>(Delta) * Q2) * norm2(u);
  return r;
}

CheckReport large_sieve_trials(const PrimeContext& ctx, const PrimeSubset& s,
                               std::size_t trials, std::uint64_t seed) {
  struct Outcome {
    LargeSieveResult r;
    double delta = 0.0;
    std::size_t points = 0;
  };
  std::vector<Outcome> out(trials);
  const double N = static_cast<double>(s.N);
  parallel_for(0, trials, [&](std::size_t t) {
    std::mt19937_64 rng(seed + t);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double delta = static_cast<double>(1 + rng() % 8) / N;
    const std::size_t want = 1 + rng() % 200;
    std::vector<WeightedPoint> raw(4 * want);
    for (auto& p : raw) p = {unif(rng), unif(rng)};
    // Half the trials seed the origin, where the sums are largest.
    if (t % 2 == 0) raw.push_back({0.0, 2.0});
    auto ws = extract_well_spaced(raw, delta);
    if (ws.size() > want) ws.resize(want);
    std::vector<double> pts;
    for (const auto& p : ws) pts.push_back(p.position);
    std::vector<cplx> u(s.members.size());
    for (auto& x : u) {
      if (t % 3 == 0) x = 1.0;
      else x = {gauss(rng), gauss(rng)};
    }
    std::vector<cplx> f;
    if (t % 4 == 1) {
      f.resize(pts.size());
      for (auto& x : f) x = {gauss(rng), gauss(rng)};
    }
    out[t] = {large_sieve_check(ctx, pts, u, s, delta, f), delta, pts.size()};
  });
  WorstCase primal("large-sieve-primal"), dual("large-sieve-dual"), levels("large-sieve-levels");
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& o = out[t];
    const std::vector<std::pair<std::string, double>> params{
        {"trial", static_cast<double>(t)}, {"delta_N", o.delta * N},
        {"points", static_cast<double>(o.points)}};
    primal.observe(o.r.primal_lhs / o.r.primal_rhs, 1.0, params);
    dual.observe(o.r.dual_rhs > 0.0 ? o.r.dual_lhs / o.r.dual_rhs : 0.0, 1.0, params);
    for (std::size_t i = 0; i < o.r.level_A.size(); ++i) {
      auto p = params;
      p.emplace_back("A", o.r.level_A[i]);
      levels.observe(static_cast<double>(o.r.level_count[i]) / o.r.level_bound[i], 1.0, p);
    }
  }
  return {primal.finish("worst lhs/rhs over the trials"), dual.finish("worst lhs/rhs over the trials"),
          levels.finish("worst count/bound over the trials and A")};
}

CheckRow spaced_moduli_trials(std::uint64_t N, std::size_t trials, std::uint64_t seed) {
  std::vector<std::pair<double, std::vector<std::pair<std::string, double>>>> res(trials);
  const auto qmax = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(N)));
  parallel_for(0, trials, [&](std::size_t t) {
    std::mt19937_64 rng(seed + t);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> u(N);
    for (auto& x : u) x = {gauss(rng), gauss(rng)};
    auto q1 = 1 + rng() % qmax, q2 = 1 + rng() % qmax;
    if (q1 > q2) std::swap(q1, q2);
    const std::uint64_t Delta = 1 + rng() % 3;
    const auto r = spaced_moduli_check(u, static_cast<double>(q1), static_cast<double>(q2), Delta);
    res[t] = {r.lhs / r.rhs,
              {{"trial", static_cast<double>(t)}, {"Q1", static_cast<double>(q1)},
               {"Q2", static_cast<double>(q2)}, {"Delta", static_cast<double>(Delta)}}};
  });
  WorstCase wc("large-sieve-spaced-moduli");
  for (auto& [ratio, params] : res) wc.observe(ratio, 1.0, std::move(params));
  return wc.finish("worst lhs/rhs over the trials");
}

CheckReport wq_large_sieve_check(const PrimeContext& ctx, const SieveWeights& w,
                                 std::span<const cplx> u, double z1) {
  const double z0 = w.params.z0, z = w.params.z;
  const double N = static_cast<double>(u.size());
  std::vector<std::pair<std::string, double>> params{
      {"z0", z0}, {"z", z}, {"tau", static_cast<double>(w.params.tau)}, {"z1", z1}, {"N", N}};

  std::string why;
  if (z0 < 35.0) why = "needs z0 >= 35";
  else if (primorial(ctx, z0) > mpz_class(static_cast<unsigned long>(std::floor(z))))
    why = "needs P(z0) <= z";
  else if (static_cast<double>(w.params.tau) > std::pow(z, 4)) why = "needs tau <= z^4";
  else if (z1 < z0 || z1 > std::sqrt(z) / std::log(z)) why = "needs z0 <= z1 <= sqrt(z)/log z";

  const double z1e = std::max(z1, 1.0);
  double lhs = 0.0;
  for (std::size_t i = 0; i < w.w_keys.size(); ++i) {
    const auto q = w.w_keys[i];
    if (static_cast<double>(q) < z1e || static_cast<double>(q) > z * z) continue;
    lhs += std::abs(w.G_float * w.w_float[i]) * coprime_energy(u, q);
  }
  const double rhs = 13.0 * (N / z1e + z * z / std::log(3.0 * z0)) * norm2(u);

  CheckReport out;
  if (why.empty()) {
    WorstCase wc("wq-large-sieve");
    wc.observe(lhs, rhs, params);
    out.push_back(wc.finish());
    return out;
  }
  out.push_back(not_applicable("wq-large-sieve", why, params));
  CheckRow row;
  row.lemma = "wq-large-sieve-measured";
  row.params = params;
  row.lhs = lhs;
  row.rhs = rhs;
  row.margin = rhs - lhs;
  row.status = CheckStatus::report_only;
  row.note = "weighted sum over all keys q >= max(z1, 1), hypotheses not met";
  out.push_back(row);
  return out;
}

}  // namespace cuspsieve
