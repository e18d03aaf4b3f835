#pragma once

// G-functions of the Selberg sieve with an unsifted range of small primes:
//
//   G_d(y; z0)          = sum_{l <= y, (l, d P(z0)) = 1} mu^2(l) / phi(l)
//   xi_q(y)             = sum_{q1 q2 q3 = q, q1 q3 <= y, q2 q3 <= y} mu(q3) phi_2(q3) / phi(q3)
//   G_[q](z; z0, tau)   = sum_{l <= z / sqrt q, (l, q tau P(z0)) = 1} mu^2(l) / phi(l) xi_q(z / l)
//
// Exact (GMP rational) evaluation is the reference; the floating variants
// exist for large y and agree to ~1e-13 relative.

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <vector>

#include "cuspsieve/arith.hpp"

namespace cuspsieve {

enum class Mode { exact, floating };

/// Parameters of one G_d(y; z0) evaluation.
struct GParams {
  double y = 1.0;
  double z0 = 2.0;
  std::uint64_t d = 1;  // coprimality modulus (d or tau)
  Mode mode = Mode::exact;
};

/// True when l is squarefree, coprime to d, and has no prime factor < z0.
bool sifted_squarefree(const Factorization& f, std::uint64_t d, double z0);

/// G_d(y) (no small-prime restriction). Throws std::out_of_range when y > ctx.limit().
mpq_class g_function(const PrimeContext& ctx, std::uint64_t d, double y);
/// G_d(y; z0).
mpq_class g_function_sifted(const PrimeContext& ctx, std::uint64_t d, double y,
                            double z0);
double g_function_sifted_float(const PrimeContext& ctx, std::uint64_t d, double y,
                               double z0);
double g_function_float(const PrimeContext& ctx, std::uint64_t d, double y);

/// Dispatch on params.mode; exact results converted to double.
double evaluate(const PrimeContext& ctx, const GParams& params);

/// xi_q(y) for squarefree q >= 1. Throws std::domain_error if q is not squarefree.
mpq_class xi_kernel(const PrimeContext& ctx, std::uint64_t q, double y);

/// xi_q(z / l) for q given by its distinct primes, with the size conditions
/// tested in integers as q1 q3 l <= z and q2 q3 l <= z.
mpq_class xi_kernel_scaled(std::span<const std::uint64_t> q_primes,
                           std::uint64_t l, double z);
double xi_kernel_scaled_float(std::span<const std::uint64_t> q_primes,
                              std::uint64_t l, double z);

/// G_[q](z; z0, tau). Throws std::domain_error when q is not squarefree or
/// shares a factor with tau P(z0), or when z < 1.
mpq_class g_bracket(const PrimeContext& ctx, std::uint64_t q, double z, double z0,
                    std::uint64_t tau);
double g_bracket_float(const PrimeContext& ctx, std::uint64_t q, double z,
                       double z0, std::uint64_t tau);

/// Floating prefix table of n -> G_d(n; z0) for integers 0 <= n <= max_y.
class GTable {
 public:
  GTable(const PrimeContext& ctx, std::uint64_t d, double z0, std::uint64_t max_y);

  /// G_d(y; z0) for real 0 <= y <= max_y (right-continuous step function).
  double operator()(double y) const;
  double at(std::uint64_t n) const { return prefix_.at(n); }
  std::uint64_t max_y() const { return prefix_.size() - 1; }

 private:
  std::vector<double> prefix_;
};

}  // namespace cuspsieve
