#include "cuspsieve/g_functions.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cuspsieve/rational.hpp"

namespace cuspsieve {

namespace {

std::uint64_t floor_checked(const PrimeContext& ctx, double y) {
  if (y < 1.0) return 0;
  const auto n = static_cast<std::uint64_t>(std::floor(y));
  if (n > ctx.limit())
    throw std::out_of_range("G-function: y = " + std::to_string(y) +
                            " exceeds the prime table limit " +
                            std::to_string(ctx.limit()));
  return n;
}

std::uint64_t phi_of(const Factorization& f, std::uint64_t n) {
  for (int i = 0; i < f.count; ++i) n = n / f.primes[i] * (f.primes[i] - 1);
  return n;
}

// Visits every ordered triple (q1, q2, q3) with q1 q2 q3 = q by assigning each
// prime to one of the three factors.
template <class Visit>
void for_each_triple(std::span<const std::uint64_t> primes, std::size_t i,
                     std::uint64_t q1, std::uint64_t q2, std::uint64_t q3,
                     std::uint64_t q3_phi, std::uint64_t q3_phi2, int q3_omega,
                     Visit&& visit) {
  if (i == primes.size()) {
    visit(q1, q2, q3, q3_phi, q3_phi2, q3_omega);
    return;
  }
  const std::uint64_t p = primes[i];
  for_each_triple(primes, i + 1, q1 * p, q2, q3, q3_phi, q3_phi2, q3_omega, visit);
  for_each_triple(primes, i + 1, q1, q2 * p, q3, q3_phi, q3_phi2, q3_omega, visit);
  for_each_triple(primes, i + 1, q1, q2, q3 * p, q3_phi * (p - 1),
                  q3_phi2 * (p - 2), q3_omega + 1, visit);
}

bool fits(std::uint64_t a, std::uint64_t l, double z) {
  return static_cast<long double>(a) * static_cast<long double>(l) <=
         static_cast<long double>(z);
}

void check_bracket_args(const PrimeContext& ctx, std::uint64_t q, double z,
                        double z0, std::uint64_t tau, Factorization& fq) {
  if (q < 1) throw std::domain_error("G_[q]: q must be >= 1");
  if (z < 1.0) throw std::domain_error("G_[q]: z must be >= 1");
  fq = ctx.factor(q);
  if (!fq.squarefree()) throw std::domain_error("G_[q]: q must be squarefree");
  if (std::gcd(q, tau) != 1) throw std::domain_error("G_[q]: q must be coprime to tau");
  for (int i = 0; i < fq.count; ++i)
    if (static_cast<double>(fq.primes[i]) < z0)
      throw std::domain_error("G_[q]: q must be coprime to P(z0)");
}

}  // namespace

bool sifted_squarefree(const Factorization& f, std::uint64_t d, double z0) {
  for (int i = 0; i < f.count; ++i) {
    if (f.exponents[i] > 1) return false;
    if (static_cast<double>(f.primes[i]) < z0) return false;
    if (d % f.primes[i] == 0) return false;
  }
  return true;
}

mpq_class g_function_sifted(const PrimeContext& ctx, std::uint64_t d, double y,
                            double z0) {
  const std::uint64_t n = floor_checked(ctx, y);
  RationalAccumulator acc;
  for (std::uint64_t l = 1; l <= n; ++l) {
    const Factorization f = ctx.factor(l);
    if (!sifted_squarefree(f, d, z0)) continue;
    acc.add(1, phi_of(f, l));
  }
  return acc.value();
}

mpq_class g_function(const PrimeContext& ctx, std::uint64_t d, double y) {
  return g_function_sifted(ctx, d, y, 2.0);
}

double g_function_sifted_float(const PrimeContext& ctx, std::uint64_t d, double y,
                               double z0) {
  const std::uint64_t n = floor_checked(ctx, y);
  CompensatedSum acc;
  for (std::uint64_t l = 1; l <= n; ++l) {
    const Factorization f = ctx.factor(l);
    if (!sifted_squarefree(f, d, z0)) continue;
    acc.add(1.0 / static_cast<double>(phi_of(f, l)));
  }
  return acc.value();
}

double g_function_float(const PrimeContext& ctx, std::uint64_t d, double y) {
  return g_function_sifted_float(ctx, d, y, 2.0);
}

double evaluate(const PrimeContext& ctx, const GParams& params) {
  if (params.mode == Mode::exact)
    return g_function_sifted(ctx, params.d, params.y, params.z0).get_d();
  return g_function_sifted_float(ctx, params.d, params.y, params.z0);
}

mpq_class xi_kernel_scaled(std::span<const std::uint64_t> q_primes,
                           std::uint64_t l, double z) {
  mpq_class total = 0;
  for_each_triple(q_primes, 0, 1, 1, 1, 1, 1, 0,
                  [&](std::uint64_t q1, std::uint64_t q2, std::uint64_t q3,
                      std::uint64_t phi3, std::uint64_t phi2_3, int omega3) {
                    if (!fits(q1 * q3, l, z) || !fits(q2 * q3, l, z)) return;
                    // phi_2(q3) vanishes when 2 | q3; the term is then zero.
                    mpq_class term(static_cast<long>(phi2_3), static_cast<unsigned long>(phi3));
                    term.canonicalize();
                    if (omega3 % 2 == 1) term = -term;
                    total += term;
                  });
  return total;
}

double xi_kernel_scaled_float(std::span<const std::uint64_t> q_primes,
                              std::uint64_t l, double z) {
  double total = 0.0;
  for_each_triple(q_primes, 0, 1, 1, 1, 1, 1, 0,
                  [&](std::uint64_t q1, std::uint64_t q2, std::uint64_t q3,
                      std::uint64_t phi3, std::uint64_t phi2_3, int omega3) {
                    if (!fits(q1 * q3, l, z) || !fits(q2 * q3, l, z)) return;
                    const double term =
                        static_cast<double>(phi2_3) / static_cast<double>(phi3);
                    total += (omega3 % 2 == 1) ? -term : term;
                  });
  return total;
}

mpq_class xi_kernel(const PrimeContext& ctx, std::uint64_t q, double y) {
  if (q < 1) throw std::domain_error("xi_q: q must be >= 1");
  if (!(y > 0.0)) throw std::domain_error("xi_q: y must be positive");
  const Factorization f = ctx.factor(q);
  if (!f.squarefree()) throw std::domain_error("xi_q: q must be squarefree");
  return xi_kernel_scaled(f.distinct(), 1, y);
}

mpq_class g_bracket(const PrimeContext& ctx, std::uint64_t q, double z, double z0,
                    std::uint64_t tau) {
  Factorization fq;
  check_bracket_args(ctx, q, z, z0, tau, fq);
  // xi_q(z/l) vanishes once l > z / sqrt(q); one extra l absorbs rounding.
  const auto l_max = static_cast<std::uint64_t>(
      std::floor(z / std::sqrt(static_cast<double>(q)))) + 1;
  floor_checked(ctx, static_cast<double>(l_max));
  mpq_class total = 0;
  const std::uint64_t coprime_to = q * tau;
  for (std::uint64_t l = 1; l <= l_max; ++l) {
    const Factorization f = ctx.factor(l);
    if (!sifted_squarefree(f, coprime_to, z0)) continue;
    const mpq_class x = xi_kernel_scaled(fq.distinct(), l, z);
    if (x == 0) continue;
    total += x / mpq_class(static_cast<unsigned long>(phi_of(f, l)));
  }
  return total;
}

double g_bracket_float(const PrimeContext& ctx, std::uint64_t q, double z,
                       double z0, std::uint64_t tau) {
  Factorization fq;
  check_bracket_args(ctx, q, z, z0, tau, fq);
  const auto l_max = static_cast<std::uint64_t>(
      std::floor(z / std::sqrt(static_cast<double>(q)))) + 1;
  floor_checked(ctx, static_cast<double>(l_max));
  CompensatedSum total;
  const std::uint64_t coprime_to = q * tau;
  for (std::uint64_t l = 1; l <= l_max; ++l) {
    const Factorization f = ctx.factor(l);
    if (!sifted_squarefree(f, coprime_to, z0)) continue;
    total.add(xi_kernel_scaled_float(fq.distinct(), l, z) /
              static_cast<double>(phi_of(f, l)));
  }
  return total.value();
}

GTable::GTable(const PrimeContext& ctx, std::uint64_t d, double z0,
               std::uint64_t max_y) {
  if (max_y > ctx.limit()) throw std::out_of_range("GTable: max_y beyond prime table");
  prefix_.assign(max_y + 1, 0.0);
  CompensatedSum acc;
  for (std::uint64_t l = 1; l <= max_y; ++l) {
    const Factorization f = ctx.factor(l);
    if (sifted_squarefree(f, d, z0)) acc.add(1.0 / static_cast<double>(phi_of(f, l)));
    prefix_[l] = acc.value();
  }
}

double GTable::operator()(double y) const {
  if (y < 1.0) return 0.0;
  const auto n = static_cast<std::uint64_t>(std::floor(y));
  if (n >= prefix_.size()) throw std::out_of_range("GTable: y beyond table");
  return prefix_[n];
}

}  // namespace cuspsieve
