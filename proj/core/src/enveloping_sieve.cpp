#include "cuspsieve/enveloping_sieve.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cuspsieve/errors.hpp"

namespace cuspsieve {

namespace {

// Squarefree products of primes[i..] (times base) not exceeding cap.
void enumerate_products(const std::vector<std::uint64_t>& primes, std::size_t i,
                        std::uint64_t base, std::uint64_t cap, std::size_t max_keys,
                        std::vector<std::uint64_t>& out) {
  out.push_back(base);
  if (out.size() > max_keys)
    throw capacity_error("enveloping sieve: more than " + std::to_string(max_keys) +
                         " admissible keys");
  for (std::size_t j = i; j < primes.size(); ++j) {
    if (base > cap / primes[j]) break;
    enumerate_products(primes, j + 1, base * primes[j], cap, max_keys, out);
  }
}

std::uint64_t phi_squarefree(std::span<const std::uint64_t> primes) {
  std::uint64_t phi = 1;
  for (const auto p : primes) phi *= p - 1;
  return phi;
}

mpz_class lcm_of_denominators(const std::vector<mpq_class>& xs) {
  mpz_class l = 1;
  for (const auto& x : xs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

std::vector<mpz_class> scale_all(const std::vector<mpq_class>& xs, const mpz_class& scale) {
  std::vector<mpz_class> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(x.get_num() * (scale / x.get_den()));
  return out;
}

// Admissible prime factors of n, ascending.
std::vector<std::uint64_t> admissible_factors(const SieveWeights& w, std::uint64_t n) {
  std::vector<std::uint64_t> f;
  for (const auto p : w.primes)
    if (n % p == 0) f.push_back(p);
  return f;
}

// Calls visit(index into lambda_keys, mu(d)) for every key d | n.
template <class Visit>
void for_each_lambda_divisor(const SieveWeights& w, std::uint64_t n, Visit&& visit) {
  const auto f = admissible_factors(w, n);
  const auto z = static_cast<std::uint64_t>(std::floor(w.params.z));
  struct Frame {
    std::size_t i;
    std::uint64_t d;
    int sign;
  };
  std::vector<Frame> stack{{0, 1, 1}};
  while (!stack.empty()) {
    const Frame fr = stack.back();
    stack.pop_back();
    visit(static_cast<std::size_t>(w.lambda_index(fr.d)), fr.sign);
    for (std::size_t j = fr.i; j < f.size(); ++j) {
      if (fr.d > z / f[j]) break;
      stack.push_back({j + 1, fr.d * f[j], -fr.sign});
    }
  }
}

void require_exact(const SieveWeights& w, const char* what) {
  if (!w.exact())
    throw precondition_error(std::string(what) + " needs exact-mode sieve weights");
}

std::int64_t c_of_key(const SieveWeights& w, std::size_t i, std::uint64_t n) {
  const std::span<const std::uint64_t> ps(w.w_key_primes.data() + w.w_key_offsets[i],
                                          w.w_key_offsets[i + 1] - w.w_key_offsets[i]);
  return ramanujan_sum_squarefree(ps, n);
}

}  // namespace

std::ptrdiff_t SieveWeights::lambda_index(std::uint64_t d) const {
  const auto it = std::lower_bound(lambda_keys.begin(), lambda_keys.end(), d);
  return (it != lambda_keys.end() && *it == d) ? it - lambda_keys.begin() : -1;
}

std::ptrdiff_t SieveWeights::w_index(std::uint64_t q) const {
  const auto it = std::lower_bound(w_keys.begin(), w_keys.end(), q);
  return (it != w_keys.end() && *it == q) ? it - w_keys.begin() : -1;
}

double SieveWeights::w_value(std::uint64_t q) const {
  const auto i = w_index(q);
  return i < 0 ? 0.0 : w_float[static_cast<std::size_t>(i)];
}

SieveWeights build_weights(const PrimeContext& ctx, const SieveParams& params) {
  if (!(params.z0 >= 2.0)) throw parameter_error("sieve: z0 must be >= 2");
  if (params.z < params.z0) throw parameter_error("sieve: need z0 <= z");
  if (params.tau == 0) throw parameter_error("sieve: tau must be >= 1");
  for (const auto p : primes_below(ctx, params.z0))
    if (params.tau % p == 0) throw parameter_error("sieve: tau must be coprime to P(z0)");
  const double z2 = params.z * params.z;
  if (z2 > static_cast<double>(ctx.limit()))
    throw std::out_of_range("sieve: prime table must reach z^2");

  SieveWeights w;
  w.params = params;
  for (const auto p : ctx.primes()) {
    if (static_cast<double>(p) > params.z) break;
    if (static_cast<double>(p) >= params.z0 && params.tau % p != 0) w.primes.push_back(p);
  }
  const auto z_int = static_cast<std::uint64_t>(std::floor(params.z));
  const auto z2_int = static_cast<std::uint64_t>(std::floor(z2));
  enumerate_products(w.primes, 0, 1, z_int, params.max_keys, w.lambda_keys);
  enumerate_products(w.primes, 0, 1, z2_int, params.max_keys, w.w_keys);
  std::sort(w.lambda_keys.begin(), w.lambda_keys.end());
  std::sort(w.w_keys.begin(), w.w_keys.end());

  w.w_key_offsets.push_back(0);
  for (const auto q : w.w_keys) {
    for (const auto p : w.primes)
      if (q % p == 0) w.w_key_primes.push_back(p);
    w.w_key_offsets.push_back(static_cast<std::uint32_t>(w.w_key_primes.size()));
  }
  auto key_primes = [&](std::size_t i) {
    return std::span<const std::uint64_t>(w.w_key_primes.data() + w.w_key_offsets[i],
                                          w.w_key_offsets[i + 1] - w.w_key_offsets[i]);
  };

  const double z = params.z, z0 = params.z0;
  const std::uint64_t tau = params.tau;
  if (w.exact()) {
    w.G = g_function_sifted(ctx, tau, z, z0);
    w.G_float = w.G.get_d();
    for (const auto d : w.lambda_keys) {
      const auto wi = static_cast<std::size_t>(w.w_index(d));
      const auto ps = key_primes(wi);
      mpq_class v(static_cast<long>(d), static_cast<unsigned long>(phi_squarefree(ps)));
      v.canonicalize();
      v *= g_function_sifted(ctx, d * tau, z / static_cast<double>(d), z0) / w.G;
      if (ps.size() % 2 == 1) v = -v;
      w.lambda.push_back(v);
      w.lambda_float.push_back(v.get_d());
    }
    const mpq_class g2 = w.G * w.G;
    for (std::size_t i = 0; i < w.w_keys.size(); ++i) {
      const auto q = w.w_keys[i];
      const auto ps = key_primes(i);
      mpq_class v = g_bracket(ctx, q, z, z0, tau) /
                    (g2 * mpq_class(static_cast<unsigned long>(phi_squarefree(ps))));
      if (ps.size() % 2 == 1) v = -v;
      w.w.push_back(v);
      w.w_float.push_back(v.get_d());
    }
    w.lambda_scale = lcm_of_denominators(w.lambda);
    w.w_scale = lcm_of_denominators(w.w);
    w.lambda_scaled = scale_all(w.lambda, w.lambda_scale);
    w.w_scaled = scale_all(w.w, w.w_scale);
  } else {
    w.G_float = g_function_sifted_float(ctx, tau, z, z0);
    for (const auto d : w.lambda_keys) {
      const auto ps = key_primes(static_cast<std::size_t>(w.w_index(d)));
      double v = static_cast<double>(d) / static_cast<double>(phi_squarefree(ps)) *
                 g_function_sifted_float(ctx, d * tau, z / static_cast<double>(d), z0) /
                 w.G_float;
      w.lambda_float.push_back(ps.size() % 2 == 1 ? -v : v);
    }
    for (std::size_t i = 0; i < w.w_keys.size(); ++i) {
      const auto ps = key_primes(i);
      const double v = g_bracket_float(ctx, w.w_keys[i], z, z0, tau) /
                       (w.G_float * w.G_float * static_cast<double>(phi_squarefree(ps)));
      w.w_float.push_back(ps.size() % 2 == 1 ? -v : v);
    }
  }
  return w;
}

mpq_class beta_direct(const SieveWeights& w, std::uint64_t n) {
  require_exact(w, "beta_direct");
  if (n == 0) throw std::domain_error("beta: n must be >= 1");
  mpz_class s = 0;
  for_each_lambda_divisor(w, n, [&](std::size_t i, int) { s += w.lambda_scaled[i]; });
  mpq_class out(s * s, w.lambda_scale * w.lambda_scale);
  out.canonicalize();
  return out;
}

double beta_direct_float(const SieveWeights& w, std::uint64_t n) {
  if (n == 0) throw std::domain_error("beta: n must be >= 1");
  double s = 0.0;
  for_each_lambda_divisor(w, n, [&](std::size_t i, int) { s += w.lambda_float[i]; });
  return s * s;
}

mpq_class beta_fourier(const SieveWeights& w, std::uint64_t n) {
  require_exact(w, "beta_fourier");
  if (n == 0) throw std::domain_error("beta: n must be >= 1");
  mpz_class s = 0;
  for (std::size_t i = 0; i < w.w_keys.size(); ++i) {
    const std::int64_t c = c_of_key(w, i, n);
    if (c > 0)
      mpz_addmul_ui(s.get_mpz_t(), w.w_scaled[i].get_mpz_t(), static_cast<unsigned long>(c));
    else
      mpz_submul_ui(s.get_mpz_t(), w.w_scaled[i].get_mpz_t(), static_cast<unsigned long>(-c));
  }
  mpq_class out(s, w.w_scale);
  out.canonicalize();
  return out;
}

double beta_fourier_float(const SieveWeights& w, std::uint64_t n) {
  if (n == 0) throw std::domain_error("beta: n must be >= 1");
  double s = 0.0;
  for (std::size_t i = 0; i < w.w_keys.size(); ++i)
    s += w.w_float[i] * static_cast<double>(c_of_key(w, i, n));
  return s;
}

FourierCheck check_fourier_equivalence(const SieveWeights& w, std::uint64_t n_max) {
  require_exact(w, "check_fourier_equivalence");
  FourierCheck out;
  const mpz_class l2 = w.lambda_scale * w.lambda_scale;
  mpz_class direct, fourier;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    mpz_class s = 0;
    for_each_lambda_divisor(w, n, [&](std::size_t i, int) { s += w.lambda_scaled[i]; });
    // beta = s^2 / l2 = f / w_scale  <=>  s^2 w_scale = f l2.
    mpz_class f = 0;
    for (std::size_t i = 0; i < w.w_keys.size(); ++i) {
      const std::int64_t c = c_of_key(w, i, n);
      if (c > 0)
        mpz_addmul_ui(f.get_mpz_t(), w.w_scaled[i].get_mpz_t(), static_cast<unsigned long>(c));
      else
        mpz_submul_ui(f.get_mpz_t(), w.w_scaled[i].get_mpz_t(), static_cast<unsigned long>(-c));
    }
    direct = s * s * w.w_scale;
    fourier = f * l2;
    ++out.checked;
    if (direct != fourier) {
      if (out.mismatches == 0) out.first_mismatch = n;
      ++out.mismatches;
    }
  }
  return out;
}

AlphaValue alpha_local(const SieveWeights& w, std::uint64_t n) {
  require_exact(w, "alpha_local");
  if (n == 0) throw std::domain_error("alpha: n must be >= 1");
  AlphaValue out;
  mpz_class s = 0;
  for_each_lambda_divisor(w, n, [&](std::size_t i, int) { s += w.lambda_scaled[i]; });
  out.divisor_sum = mpq_class(s, w.lambda_scale);
  out.divisor_sum.canonicalize();
  mpq_class e = 0;
  for (const auto q : w.lambda_keys) {
    const auto i = static_cast<std::size_t>(w.w_index(q));
    const std::int64_t c = c_of_key(w, i, n);
    if (c == 0) continue;
    const auto cnt = w.w_key_offsets[i + 1] - w.w_key_offsets[i];
    std::uint64_t phi = 1;
    for (auto k = w.w_key_offsets[i]; k < w.w_key_offsets[i + 1]; ++k)
      phi *= w.w_key_primes[k] - 1;
    mpq_class term(static_cast<long>(cnt % 2 == 1 ? -c : c), static_cast<unsigned long>(phi));
    term.canonicalize();
    e += term;
  }
  out.expansion = e / w.G;
  if (out.expansion != out.divisor_sum)
    throw std::logic_error("alpha: divisor sum and Ramanujan expansion differ at n = " +
                           std::to_string(n));
  return out;
}

double hardy_partial(const PrimeContext& ctx, std::uint64_t n, std::uint64_t Q) {
  if (n < 2) throw std::domain_error("hardy_partial: the expansion is not valid at n = 1");
  if (Q < 1) throw std::domain_error("hardy_partial: Q must be >= 1");
  if (Q > ctx.limit() || n > ctx.limit())
    throw std::out_of_range("hardy_partial: n and Q must lie inside the prime table");
  double s = 0.0;
  for (std::uint64_t q = 1; q <= Q; ++q) {
    const int mu = ctx.mobius(q);
    if (mu == 0) continue;
    s += mu * static_cast<double>(ramanujan_sum(ctx, q, n)) /
         static_cast<double>(ctx.euler_phi(q));
  }
  return static_cast<double>(n) / static_cast<double>(ctx.euler_phi(n)) * s;
}

std::complex<double> beta_mean_coefficient(const SieveWeights& w, std::uint64_t d,
                                           std::uint64_t a, std::uint64_t L) {
  if (d == 0 || L == 0) throw std::domain_error("beta_mean_coefficient: d, L must be >= 1");
  std::complex<double> s = 0.0;
  for (std::uint64_t n = 1; n <= L; ++n) {
    const double b = beta_direct_float(w, n);
    if (b == 0.0) continue;
    const double phase = 2.0 * std::numbers::pi *
                         static_cast<double>((n % d) * (a % d) % d) / static_cast<double>(d);
    s += b * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return s / static_cast<double>(L);
}

CheckReport enveloping_report(const PrimeContext& ctx, const SieveWeights& w,
                              std::uint64_t n_max) {
  require_exact(w, "enveloping_report");
  if (n_max > ctx.limit()) throw std::out_of_range("enveloping_report: n_max beyond the prime table");
  const std::vector<std::pair<std::string, double>> params{
      {"z0", w.params.z0}, {"z", w.params.z}, {"tau", static_cast<double>(w.params.tau)},
      {"n_max", static_cast<double>(n_max)}};
  const mpq_class one(1);
  std::uint64_t primes = 0, bad_primes = 0, first_bad_prime = 0;
  for (const auto p : ctx.primes()) {
    if (p > n_max) break;
    if (static_cast<double>(p) <= w.params.z) continue;
    ++primes;
    if (beta_direct(w, p) != one || beta_fourier(w, p) != one) {
      if (bad_primes++ == 0) first_bad_prime = p;
    }
  }
  std::uint64_t negative = 0, first_negative = 0;
  mpz_class f;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    f = 0;
    for (std::size_t i = 0; i < w.w_keys.size(); ++i) {
      const std::int64_t c = c_of_key(w, i, n);
      if (c > 0)
        mpz_addmul_ui(f.get_mpz_t(), w.w_scaled[i].get_mpz_t(), static_cast<unsigned long>(c));
      else if (c < 0)
        mpz_submul_ui(f.get_mpz_t(), w.w_scaled[i].get_mpz_t(), static_cast<unsigned long>(-c));
    }
    if (sgn(f) < 0 && negative++ == 0) first_negative = n;
  }
  CheckReport out;
  WorstCase at_primes("sieve-beta-at-primes");
  auto pp = params;
  pp.emplace_back("primes", static_cast<double>(primes));
  pp.emplace_back("first_mismatch", static_cast<double>(first_bad_prime));
  at_primes.observe(static_cast<double>(bad_primes), 0.0, pp);
  out.push_back(at_primes.finish("count of primes with beta(p) != 1"));
  WorstCase nonneg("sieve-beta-nonnegative");
  auto pn = params;
  pn.emplace_back("first_negative", static_cast<double>(first_negative));
  nonneg.observe(static_cast<double>(negative), 0.0, pn);
  out.push_back(nonneg.finish("count of n with beta(n) < 0"));
  return out;
}

CheckReport wq_bound_report(const PrimeContext& ctx, const SieveWeights& w) {
  CheckReport out;
  const double z0 = w.params.z0;
  const double G = w.G_float;
  const bool exact = w.exact();
  WorstCase prime_row("wq-prime");
  WorstCase two_row("wq-two-primes");
  WorstCase bound_row("wq-divisor-bound", exact ? 0.0 : 1e-9);
  WorstCase pow23("wq-power-2/3", 1e-12);
  WorstCase pow710("wq-power-7/10", 1e-12);
  WorstCase ter("wq-max-scaled", 1e-12);

  const double z = w.params.z;
  const bool have_z2 = z * z <= static_cast<double>(ctx.limit());
  mpq_class g_ratio = 0;
  double g_ratio_f = 0.0;
  if (have_z2) {
    if (exact) {
      g_ratio = g_function_sifted(ctx, w.params.tau, z * z, z0) / w.G;
      g_ratio_f = g_ratio.get_d();
    } else {
      g_ratio_f = g_function_sifted_float(ctx, w.params.tau, z * z, z0) / G;
    }
  }
  double max_scaled = 0.0;
  double max_at = 0.0;
  for (std::size_t i = 0; i < w.w_keys.size(); ++i) {
    const auto q = w.w_keys[i];
    const double qd = static_cast<double>(q);
    const std::span<const std::uint64_t> ps(w.w_key_primes.data() + w.w_key_offsets[i],
                                            w.w_key_offsets[i + 1] - w.w_key_offsets[i]);
    const auto phi = phi_squarefree(ps);
    // G w_q, exactly when available; doubles of exact values keep <= orderings.
    mpq_class gw_exact;
    double gw;
    if (exact) {
      gw_exact = w.w[i] * w.G;
      gw = gw_exact.get_d();
    } else {
      gw = w.w_float[i] * G;
    }
    const std::vector<std::pair<std::string, double>> prm{{"q", qd}};
    if (ps.size() == 1) {
      const double v = exact ? mpq_class(gw_exact * (q - 1)).get_d() : gw * (qd - 1.0);
      prime_row.observe(-1.0, v, prm);
      prime_row.observe(v, 0.0, prm);
    } else if (ps.size() == 2) {
      const double v = exact ? mpq_class(gw_exact * phi).get_d() : gw * static_cast<double>(phi);
      const double cap = std::max(2.0, qd / static_cast<double>(phi));
      two_row.observe(0.0, v, prm);
      two_row.observe(v, cap, prm);
    }
    if (have_z2) {
      std::uint64_t count = 0;
      // Ordered triples q1 q2 q3 = q with q1 q3 <= z and q2 q3 <= z.
      const std::size_t k = ps.size();
      std::uint64_t assignments = 1;
      for (std::size_t j = 0; j < k; ++j) assignments *= 3;
      for (std::uint64_t code = 0; code < assignments; ++code) {
        std::uint64_t q1 = 1, q2 = 1, q3 = 1, c = code;
        for (std::size_t j = 0; j < k; ++j, c /= 3) {
          if (c % 3 == 0) q1 *= ps[j];
          else if (c % 3 == 1) q2 *= ps[j];
          else q3 *= ps[j];
        }
        if (static_cast<double>(q1 * q3) <= z && static_cast<double>(q2 * q3) <= z) ++count;
      }
      if (exact) {
        const mpq_class rhs = g_ratio * mpq_class(static_cast<unsigned long>(count),
                                                  static_cast<unsigned long>(q));
        bound_row.observe(mpq_class(abs(gw_exact)).get_d(), mpq_class(rhs).get_d(), prm);
      } else {
        bound_row.observe(std::abs(gw), g_ratio_f * static_cast<double>(count) / qd, prm);
      }
    }
    if (q > 1) {
      pow23.observe(std::abs(gw), std::pow(qd, -2.0 / 3.0), prm);
      pow710.observe(std::abs(gw), 1.04 * std::pow(qd, -0.7), prm);
    }
    if (qd >= z0 && std::abs(gw) > max_scaled) {
      max_scaled = std::abs(gw);
      max_at = qd;
    }
  }
  if (max_at > 0.0) ter.observe(z0 * max_scaled, 1.0 + 2.2 / z0, {{"q", max_at}, {"z0", z0}});

  out.push_back(prime_row.finish());
  out.push_back(two_row.finish());
  out.push_back(have_z2 ? bound_row.finish()
                        : not_applicable("wq-divisor-bound", "prime table does not reach z^2"));
  out.push_back(z0 >= 24.0 ? pow23.finish()
                           : not_applicable("wq-power-2/3", "needs z0 >= 24", {{"z0", z0}}));
  out.push_back(z0 >= 35.0 ? pow710.finish()
                           : not_applicable("wq-power-7/10", "needs z0 >= 35", {{"z0", z0}}));
  out.push_back(z0 >= 34.0 ? ter.finish()
                           : not_applicable("wq-max-scaled", "needs z0 >= 34", {{"z0", z0}}));

  // Scale-free ingredient of the power bounds, checked whatever the parameters.
  WorstCase ingredient("wq-prime-factor-ingredient", 1e-12);
  const std::uint64_t pmax = std::min<std::uint64_t>(100'000, ctx.limit());
  for (const auto p32 : ctx.primes()) {
    if (p32 > pmax) break;
    if (p32 <= 23) continue;
    const double p = p32;
    ingredient.observe((3.0 * p - 4.0) * std::pow(p, 2.0 / 3.0) / ((p - 1.0) * (p - 1.0)), 1.0,
                       {{"p", p}});
  }
  out.push_back(ingredient.finish("(3p - 4) p^(2/3) / (p - 1)^2 <= 1 for primes 23 < p <= 1e5"));
  return out;
}

namespace {

void write_csv(std::ostream& out, const std::vector<std::uint64_t>& keys,
               const std::vector<mpq_class>& exact, const std::vector<double>& approx) {
  out << "key,num,den,value\n";
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out << keys[i] << ',';
    if (!exact.empty())
      out << exact[i].get_num().get_str() << ',' << exact[i].get_den().get_str() << ',';
    else
      out << ",,";
    out << approx[i] << '\n';
  }
  out.precision(old);
}

}  // namespace

void write_lambda_csv(std::ostream& out, const SieveWeights& w) {
  write_csv(out, w.lambda_keys, w.lambda, w.lambda_float);
}

void write_w_csv(std::ostream& out, const SieveWeights& w) {
  write_csv(out, w.w_keys, w.w, w.w_float);
}

}  // namespace cuspsieve
