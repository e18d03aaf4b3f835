#pragma once

// Enveloping sieve weights
//
//   lambda_d = mu(d) d G_{d tau}(z/d; z0) / (phi(d) G_tau(z; z0))      (d <= z, (d, tau P(z0)) = 1)
//   beta(n)  = (sum_{d | n} lambda_d)^2 = sum_q w_q c_q(n)
//   w_q      = mu(q) G_[q](z; z0, tau) / (phi(q) G_tau(z; z0)^2)
//
// The w_q vanish unless q is a product of admissible primes (z0 <= p <= z,
// p not dividing tau), so only those keys are stored.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <ostream>
#include <vector>

#include "cuspsieve/arith.hpp"
#include "cuspsieve/g_functions.hpp"
#include "cuspsieve/report.hpp"

namespace cuspsieve {

struct SieveParams {
  double z0 = 2.0;
  double z = 20.0;
  std::uint64_t tau = 1;
  Mode mode = Mode::exact;
  std::size_t max_keys = 1'000'000;
};

struct SieveWeights {
  SieveParams params;
  std::vector<std::uint64_t> primes;  // admissible primes, ascending

  std::vector<std::uint64_t> lambda_keys;  // ascending
  std::vector<double> lambda_float;
  std::vector<std::uint64_t> w_keys;  // ascending
  std::vector<double> w_float;
  double G_float = 0.0;

  // Exact mode only.
  std::vector<mpq_class> lambda;
  std::vector<mpq_class> w;
  mpq_class G;
  // lambda_scaled[i] = lambda[i] * lambda_scale, w_scaled[i] = w[i] * w_scale (integers).
  mpz_class lambda_scale, w_scale;
  std::vector<mpz_class> lambda_scaled, w_scaled;
  // Flattened prime factors of each w key: w_key_primes[w_key_offsets[i] .. w_key_offsets[i+1]).
  std::vector<std::uint64_t> w_key_primes;
  std::vector<std::uint32_t> w_key_offsets;

  bool exact() const { return params.mode == Mode::exact; }
  /// Index of d in lambda_keys (or w_keys), -1 when absent.
  std::ptrdiff_t lambda_index(std::uint64_t d) const;
  std::ptrdiff_t w_index(std::uint64_t q) const;
  /// Value of w_q for any q >= 1 (zero off the key set).
  double w_value(std::uint64_t q) const;
};

/// Requires ctx.limit() >= z^2. Throws parameter_error on z < z0, tau = 0 or
/// gcd(tau, P(z0)) > 1, capacity_error when the key count exceeds max_keys.
SieveWeights build_weights(const PrimeContext& ctx, const SieveParams& params);

/// beta(n) from the divisor sum. Exact variants need exact-mode weights.
mpq_class beta_direct(const SieveWeights& w, std::uint64_t n);
double beta_direct_float(const SieveWeights& w, std::uint64_t n);
/// beta(n) = sum_q w_q c_q(n).
mpq_class beta_fourier(const SieveWeights& w, std::uint64_t n);
double beta_fourier_float(const SieveWeights& w, std::uint64_t n);

struct FourierCheck {
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t first_mismatch = 0;  // 0 when none
};
/// Exact comparison of both expressions for 1 <= n <= n_max, on scaled integers.
FourierCheck check_fourier_equivalence(const SieveWeights& w, std::uint64_t n_max);

struct AlphaValue {
  mpq_class divisor_sum;  // sum_{d | n} lambda_d
  mpq_class expansion;    // (1/G) sum_{q <= z} mu(q)/phi(q) c_q(n)
};
/// Both expressions of alpha(n); throws std::logic_error if they differ.
AlphaValue alpha_local(const SieveWeights& w, std::uint64_t n);

/// (n/phi(n)) sum_{q <= Q} mu(q)/phi(q) c_q(n). Throws std::domain_error for n < 2.
double hardy_partial(const PrimeContext& ctx, std::uint64_t n, std::uint64_t Q);

/// (1/L) sum_{n <= L} beta(n) e(n a / d), floating.
std::complex<double> beta_mean_coefficient(const SieveWeights& w, std::uint64_t d,
                                           std::uint64_t a, std::uint64_t L);

/// Exact checks that beta(p) = 1 for primes z < p <= n_max (both expressions)
/// and beta(n) >= 0 for 1 <= n <= n_max (Fourier expression). Exact mode only.
CheckReport enveloping_report(const PrimeContext& ctx, const SieveWeights& w,
                              std::uint64_t n_max);

/// Pointwise bounds on w_q, each gated on its own hypotheses.
CheckReport wq_bound_report(const PrimeContext& ctx, const SieveWeights& w);

/// CSV with columns key,num,den,value.
void write_lambda_csv(std::ostream& out, const SieveWeights& w);
void write_w_csv(std::ostream& out, const SieveWeights& w);

}  // namespace cuspsieve
