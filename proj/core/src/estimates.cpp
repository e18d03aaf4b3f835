#include "cuspsieve/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cuspsieve/g_functions.hpp"

namespace cuspsieve {

namespace {

using Params = std::vector<std::pair<std::string, double>>;

const double kExpMinusGamma = std::exp(-kEulerGamma);
const double kExpGamma = std::exp(kEulerGamma);

double as_d(std::uint64_t n) { return static_cast<double>(n); }

std::uint64_t table_cap(const PrimeContext& ctx, std::uint64_t want) {
  return std::min<std::uint64_t>(want, ctx.limit());
}

// Exact prefix sums n -> G_d(n; z0) for 0 <= n <= max_n.
std::vector<mpq_class> exact_prefix(const PrimeContext& ctx, std::uint64_t d,
                                    double z0, std::uint64_t max_n) {
  std::vector<mpq_class> out(max_n + 1, 0);
  for (std::uint64_t l = 1; l <= max_n; ++l) {
    out[l] = out[l - 1];
    const Factorization f = ctx.factor(l);
    if (sifted_squarefree(f, d, z0))
      out[l] += mpq_class(1, static_cast<unsigned long>(ctx.euler_phi(l)));
  }
  return out;
}

}  // namespace

double log_primorial(const PrimeContext& ctx, double z0) {
  double s = 0.0;
  for (const auto p : ctx.primes()) {
    if (static_cast<double>(p) >= z0) break;
    s += std::log(static_cast<double>(p));
  }
  return s;
}

CheckReport check_g_asymptotic(const PrimeContext& ctx, const EstimateRanges& r) {
  CheckReport out;
  const std::uint64_t zmax = table_cap(ctx, r.zmax);
  const GTable g(ctx, 1, 2.0, zmax);
  for (const double z : r.approx_points) {
    WorstCase wc("g-asymptotic-point");
    if (z >= 1.0 && z <= static_cast<double>(zmax))
      wc.observe(std::abs(g(z) - std::log(z) - kC0), 2.44 / std::sqrt(z), {{"z", z}});
    out.push_back(wc.finish(z <= static_cast<double>(zmax) ? "" : "z beyond table"));
  }
  // On [n, n+1) the deviation G(n) - c0 - log z decreases, so its positive part
  // is worst at z = n and its negative part in the limit z -> n + 1.
  WorstCase wc("g-asymptotic-range");
  for (std::uint64_t n = 1; n < zmax; ++n) {
    const double dev = g.at(n) - kC0;
    const double x = as_d(n), x1 = as_d(n + 1);
    wc.observe(dev - std::log(x), 2.44 / std::sqrt(x), {{"z", x}});
    wc.observe(std::log(x1) - dev, 2.44 / std::sqrt(x1), {{"z", x1}});
  }
  out.push_back(wc.finish("every real z in [1, zmax)"));
  return out;
}

CheckReport check_g_square(const PrimeContext& ctx, const EstimateRanges& r) {
  CheckReport out;
  // z in [n, n+1) needs G(n^2 + 2n) <= 2 G(n); the top point z = n_max is checked alone.
  std::uint64_t n_max = r.square_zmax;
  while (n_max > 2 && n_max * n_max + 2 * n_max > ctx.limit()) --n_max;
  const GTable g(ctx, 1, 2.0, table_cap(ctx, std::max(r.zmax, n_max * n_max + 2 * n_max)));
  WorstCase dbl("g-square-doubling");
  for (std::uint64_t n = 2; n < n_max; ++n)
    dbl.observe(g.at(n * n + 2 * n), 2.0 * g.at(n), {{"z", as_d(n)}});
  if (n_max >= 2) dbl.observe(g.at(n_max * n_max), 2.0 * g.at(n_max), {{"z", as_d(n_max)}});
  out.push_back(dbl.finish(n_max < r.square_zmax ? "range capped by the prime table" : ""));

  WorstCase upper("g-minus-log-upper");
  WorstCase lower("g-minus-log-lower");
  for (std::uint64_t n = 10; n < g.max_y(); ++n) {
    upper.observe(g.at(n) - std::log(as_d(n)), 1.4709, {{"z", as_d(n)}});
    lower.observe(1.2, g.at(n) - std::log(as_d(n + 1)), {{"z", as_d(n + 1)}});
  }
  out.push_back(upper.finish());
  out.push_back(lower.finish());
  return out;
}

CheckRow check_squarefree_count(const PrimeContext& ctx, const EstimateRanges& r) {
  const std::uint64_t zmax = table_cap(ctx, r.zmax);
  // The count is constant on [n, n+1) while Q/2 grows, so Q -> n+1 is worst.
  WorstCase wc("squarefree-count");
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= zmax; ++n) {
    if (ctx.squarefree(n)) ++count;
    const double q = n < zmax ? as_d(n + 1) : as_d(n);
    wc.observe(q / 2.0, as_d(count), {{"Q", q}});
  }
  return wc.finish("every real Q in [1, zmax]");
}

CheckReport check_mertens_lower(const PrimeContext& ctx, const EstimateRanges& r) {
  CheckReport out;
  const auto primes = ctx.primes();
  const double zmax = static_cast<double>(table_cap(ctx, r.zmax));
  // V is constant on (p_k, p_{k+1}] while the bound decreases in z0, so the
  // infimum z0 -> p_k+ is worst; z0 in [2, 3] has V = 1.
  WorstCase small("mertens-lower-9/5");
  WorstCase large("mertens-lower-1.23");
  small.observe(kExpMinusGamma / std::log(9.0 * 2.0 / 5.0), 1.0, {{"z0", 2.0}});
  double v = 1.0;
  double holds_from = 0.0;
  for (const auto p32 : primes) {
    const double p = p32;
    if (p >= zmax) break;
    v *= (p - 1.0) / p;
    small.observe(kExpMinusGamma / std::log(9.0 * p / 5.0), v, {{"z0", p}});
    if (p >= 31.0) {
      const double bound = kExpMinusGamma / std::log(1.23 * p);
      large.observe(bound, v, {{"z0", p}});
      // z0 at which the bound has dropped to V on this interval.
      if (bound > v) holds_from = std::exp(kExpMinusGamma / v) / 1.23;
    }
  }
  out.push_back(small.finish("worst case is z0 just above a prime"));
  out.push_back(large.finish(
      large.violations() ? "fails just above z0 = 31, where the product already includes 31"
                         : ""));
  if (large.violations()) {
    CheckRow row;
    row.lemma = "mertens-lower-1.23-threshold";
    row.status = CheckStatus::report_only;
    row.lhs = holds_from;
    row.rhs = zmax;
    row.margin = zmax - holds_from;
    row.params = {{"z0_from", holds_from}};
    row.note = "the 1.23 bound holds for every z0 in [z0_from, zmax]";
    out.push_back(row);
  }
  return out;
}

CheckRow check_log_sum(const PrimeContext& ctx, const EstimateRanges& r) {
  const auto primes = ctx.primes();
  const double zmax = static_cast<double>(table_cap(ctx, r.zmax));
  // The sum over p < z0 is constant on (p_k, p_{k+1}]; log z0 is largest at the right end.
  WorstCase wc("log-sum-lower");
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < primes.size(); ++i) {
    const double p = primes[i];
    s += std::log(p) / (p - 1.0);
    const double right = std::min<double>(primes[i + 1], zmax);
    if (right >= 3.0) wc.observe(std::log(right) - 0.6, s, {{"z0", right}});
    if (primes[i + 1] >= zmax) break;
  }
  return wc.finish("checked numerically only");
}

CheckReport check_z0_vs_log_z(const PrimeContext& ctx, const EstimateRanges& r) {
  CheckReport out;
  const auto primes = ctx.primes();
  const double zmax = static_cast<double>(table_cap(ctx, r.zmax));
  // z >= P(z0) makes log z >= theta(z0-); P(z0) is fixed on (p_k, p_{k+1}], so
  // z0 = p_{k+1} and z = P(z0) is the worst case. z0 in [35, 37] shares P(37).
  WorstCase wc("z0-vs-log-z");
  double theta = 0.0;
  double last_fail = 0.0;
  for (std::size_t i = 0; i + 1 < primes.size(); ++i) {
    theta += std::log(static_cast<double>(primes[i]));
    const double right = primes[i + 1];
    if (right > zmax) break;
    if (right < 35.0) continue;
    wc.observe(right, 1.25 * theta, {{"z0", right}, {"log_z", theta}});
    if (right > 1.25 * theta) last_fail = right;
  }
  out.push_back(wc.finish(wc.violations() ? "false as stated: z = P(z0) is a counterexample"
                                          : ""));
  if (wc.violations()) {
    CheckRow row;
    row.lemma = "z0-vs-log-z-threshold";
    row.status = CheckStatus::report_only;
    row.lhs = last_fail;
    row.rhs = zmax;
    row.margin = zmax - last_fail;
    row.params = {{"z0_from", last_fail}};
    row.note = "holds for every z0 > z0_from up to zmax";
    out.push_back(row);
  }
  return out;
}

CheckReport check_sifted_count(const PrimeContext& ctx, const EstimateRanges& r) {
  CheckReport out;
  const std::uint64_t qmax = r.sifted_count_qmax;
  const auto primes = ctx.primes();
  WorstCase wc("sifted-count");
  // z0 ranges over (p_k, p_{k+1}] with z0 >= 35; the bound decreases in z0, so
  // z0 = p_{k+1}. Needs sqrt(P(z0)) <= qmax.
  std::vector<std::uint64_t> sifting;
  for (std::size_t i = 0; i + 1 < primes.size(); ++i) {
    sifting.push_back(primes[i]);
    const double z0 = primes[i + 1];
    if (z0 < 35.0) continue;
    double log_p = 0.0;
    for (const auto p : sifting) log_p += std::log(static_cast<double>(p));
    const double q_min = std::exp(log_p / 2.0);
    if (q_min > static_cast<double>(qmax)) break;
    std::vector<char> coprime(qmax + 1, 1);
    coprime[0] = 0;
    for (const auto p : sifting)
      for (std::uint64_t m = p; m <= qmax; m += p) coprime[m] = 0;
    const double scale = 1.1 / std::log(3.0 * z0);
    std::uint64_t count = 0;
    const auto first = static_cast<std::uint64_t>(std::floor(q_min));
    for (std::uint64_t n = 1; n <= qmax; ++n) {
      count += coprime[n];
      if (n < first) continue;
      // Constant count on [n, n+1): worst at the left end, or at sqrt P when it lies inside.
      const double q = std::max(as_d(n), q_min);
      wc.observe(as_d(count), scale * q, {{"z0", z0}, {"Q", q}});
    }
  }
  out.push_back(wc.finish("hypotheses reachable only for z0 up to the first prime with sqrt P(z0) > Qmax"));
  return out;
}

CheckRow check_g_sifted_lower(const PrimeContext& ctx, const EstimateRanges& r) {
  const std::uint64_t zmax = table_cap(ctx, r.zmax);
  WorstCase wc("g-sifted-lower");
  // For z0 in (p_k, p_{k+1}] the sum is fixed and the bound largest at z0 -> p_k+;
  // for z in [n, n+1) it is largest as z -> n + 1.
  auto scan = [&](double z0_inf, double sift_below) {
    const GTable g(ctx, 1, sift_below, zmax);
    const auto n0 = static_cast<std::uint64_t>(std::floor(z0_inf));
    for (std::uint64_t n = std::max<std::uint64_t>(n0, 2); n < zmax; ++n)
      wc.observe(kExpMinusGamma * std::log(as_d(n + 1)) / std::log(2.0 * z0_inf), g.at(n),
                 {{"z0", z0_inf}, {"z", as_d(n + 1)}});
  };
  scan(2.0, 2.0);
  for (const auto p : ctx.primes()) {
    if (p > r.sifted_lower_prime_max || p >= zmax) break;
    scan(static_cast<double>(p), static_cast<double>(p) + 0.5);
  }
  return wc.finish();
}

CheckReport check_van_lint_richert(const PrimeContext& ctx, const EstimateRanges& r) {
  const std::uint64_t zmax = table_cap(ctx, r.vanlr_zmax);
  const std::uint64_t exact_max = std::min(zmax, r.vanlr_exact_zmax);
  WorstCase lower("g-chain-lower", 1e-12);
  WorstCase upper("g-chain-upper", 1e-12);
  WorstCase exact("g-chain-exact");
  for (const double z0 : r.vanlr_z0) {
    for (const auto tau : r.vanlr_tau) {
      const GTable g_tau(ctx, tau, z0, zmax);
      const auto ex_tau = exact_prefix(ctx, tau, z0, exact_max);
      for (std::uint64_t q = 1; q <= r.vanlr_qmax; ++q) {
        const Factorization f = ctx.factor(q);
        if (!sifted_squarefree(f, tau, z0)) continue;
        const double ratio = as_d(q) / as_d(ctx.euler_phi(q));
        const GTable g_q(ctx, q * tau, z0, zmax / q);
        for (std::uint64_t z = 1; z <= zmax; ++z) {
          const Params prm{{"q", as_d(q)}, {"z", as_d(z)}, {"z0", z0}, {"tau", as_d(tau)}};
          const double mid = ratio * g_q.at(z / q);
          lower.observe(g_tau.at(z / q), mid, prm);
          upper.observe(mid, g_tau.at(z), prm);
        }
        const auto ex_q = exact_prefix(ctx, q * tau, z0, exact_max / q);
        const mpq_class ratio_q(static_cast<long>(q), ctx.euler_phi(q));
        for (std::uint64_t z = 1; z <= exact_max; ++z) {
          const mpq_class mid = ratio_q * ex_q[z / q];
          const Params prm{{"q", as_d(q)}, {"z", as_d(z)}, {"z0", z0}, {"tau", as_d(tau)}};
          // Record the tighter of the two links; a violation of either is a violation.
          const bool low_ok = ex_tau[z / q] <= mid;
          const bool up_ok = mid <= ex_tau[z];
          const mpq_class gap_low = mid - ex_tau[z / q];
          const mpq_class gap_up = ex_tau[z] - mid;
          if (!low_ok || (up_ok && gap_low <= gap_up))
            exact.observe(ex_tau[z / q].get_d(), mid.get_d(), prm);
          else
            exact.observe(mid.get_d(), ex_tau[z].get_d(), prm);
        }
      }
    }
  }
  return {lower.finish("floating, relative tolerance 1e-12"),
          upper.finish("floating, relative tolerance 1e-12"),
          exact.finish("exact rationals")};
}

CheckReport check_rosser_schoenfeld(const PrimeContext& ctx, const EstimateRanges& r) {
  const auto primes = ctx.primes();
  const double xmax = static_cast<double>(table_cap(ctx, r.zmax));
  WorstCase pi_lower("prime-count-lower");
  WorstCase pi_upper("prime-count-upper-5/4");
  WorstCase pi_upper2("prime-count-upper-3/2");
  WorstCase prod_upper("mertens-inverse-upper");
  WorstCase prod_lower("mertens-inverse-lower");
  WorstCase prod_upper2("mertens-inverse-upper-sqrt");
  auto upper_54 = [](double x) { return 1.25 * x / std::log(x); };
  auto upper_32 = [](double x) {
    const double l = std::log(x);
    return x / l * (1.0 + 1.5 / l);
  };
  // pi and the product are constant on [p_k, p_{k+1}). The lower bounds grow
  // with x (worst as x -> p_{k+1}), the upper bounds too (worst at x = p_k or
  // at the start of the stated range).
  const double pi114 = static_cast<double>(ctx.prime_count(114));
  pi_upper.observe(pi114, upper_54(114.0), {{"x", 114.0}});
  pi_upper2.observe(pi114, upper_32(114.0), {{"x", 114.0}});
  double prod = 1.0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const double p = primes[i];
    if (p > xmax) break;
    const double k = static_cast<double>(i + 1);
    prod *= p / (p - 1.0);
    const double next = i + 1 < primes.size() ? std::min<double>(primes[i + 1], xmax) : xmax;
    if (p >= 17.0) pi_lower.observe(next / std::log(next), k, {{"x", next}});
    if (p >= 114.0) {
      pi_upper.observe(k, upper_54(p), {{"x", p}});
      pi_upper2.observe(k, upper_32(p), {{"x", p}});
    }
    const double lp = std::log(p);
    if (p >= 286.0) prod_upper.observe(prod, kExpGamma * lp * (1.0 + 0.5 / (lp * lp)), {{"x", p}});
    prod_upper2.observe(prod, kExpGamma * lp + 2.0 * kExpGamma / std::sqrt(p), {{"x", p}});
    prod_lower.observe(kExpGamma * std::log(next), prod, {{"x", next}});
  }
  // The products at x = 286 come from the prime just below it.
  double prod286 = 1.0;
  for (const auto p : primes) {
    if (p > 286) break;
    prod286 *= static_cast<double>(p) / (static_cast<double>(p) - 1.0);
  }
  const double l286 = std::log(286.0);
  prod_upper.observe(prod286, kExpGamma * l286 * (1.0 + 0.5 / (l286 * l286)), {{"x", 286.0}});
  return {pi_lower.finish(), pi_upper.finish(), pi_upper2.finish(),
          prod_upper.finish(), prod_lower.finish(), prod_upper2.finish()};
}

CheckReport check_large_z0(const PrimeContext& ctx, const EstimateRanges& r) {
  CheckReport out;
  const double log_p35 = log_primorial(ctx, 35.0);
  const double zmax = static_cast<double>(r.zmax);
  const Params prm{{"z0", 35.0}, {"min_z", std::exp(log_p35)}, {"zmax", zmax}};
  for (const char* id : {"g-square-upper", "g-sifted-lower-large", "g-square-ratio",
                         "g-tau-ratio"}) {
    // Reaching P(35) would take ~2e11 terms, beyond any exhaustive sum here.
    const bool reachable = std::log(zmax) >= log_p35 && zmax <= r.term_cap;
    out.push_back(not_applicable(
        id, reachable ? "not implemented beyond the exhaustive range"
                      : "hypotheses unsatisfiable at this scale: z0 >= 35 needs z >= P(z0) > zmax",
        prm));
  }
  return out;
}

CheckReport verify_explicit_estimates(const PrimeContext& ctx, const EstimateRanges& r) {
  CheckReport out;
  auto append = [&](CheckReport rows) {
    for (auto& row : rows) out.push_back(std::move(row));
  };
  append(check_g_asymptotic(ctx, r));
  append(check_g_square(ctx, r));
  out.push_back(check_squarefree_count(ctx, r));
  append(check_mertens_lower(ctx, r));
  out.push_back(check_log_sum(ctx, r));
  append(check_z0_vs_log_z(ctx, r));
  append(check_sifted_count(ctx, r));
  out.push_back(check_g_sifted_lower(ctx, r));
  append(check_van_lint_richert(ctx, r));
  append(check_rosser_schoenfeld(ctx, r));
  append(check_large_z0(ctx, r));
  return out;
}

}  // namespace cuspsieve
