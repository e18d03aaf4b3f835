#pragma once

// Exponential sums over prime subsets, T*(alpha) = sum_{p in P*} e(p alpha),
// their FFT spectra, and the sifted local models that approximate them.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cuspsieve/arith.hpp"

namespace cuspsieve {

using cplx = std::complex<double>;

enum class SubsetKind { full, sqrt2, random };

std::string_view to_string(SubsetKind k);

/// A set of primes in [lower, N], lower = ceil(sqrt N) unless overridden.
struct PrimeSubset {
  std::uint64_t N = 0;
  std::uint64_t lower = 0;
  SubsetKind kind = SubsetKind::full;
  double density = 1.0;    // random subsets only
  std::uint64_t seed = 0;  // random subsets only
  std::vector<std::uint64_t> members;  // ascending
  double K = 0.0;          // N / (|members| log N)

  double T0() const { return static_cast<double>(members.size()); }
  bool contains(std::uint64_t p) const;
};

/// lower_cutoff <= 0 means ceil(sqrt N). All throw std::domain_error for
/// N < 100 or an empty result; ctx must reach N.
PrimeSubset subset_full(const PrimeContext& ctx, std::uint64_t N, double lower_cutoff = 0);
/// Primes with {p sqrt 2} <= 1/2, decided exactly in integer arithmetic.
PrimeSubset subset_sqrt2(const PrimeContext& ctx, std::uint64_t N, double lower_cutoff = 0);
/// Each prime kept independently with probability density; reproducible from seed.
PrimeSubset subset_random(const PrimeContext& ctx, std::uint64_t N, double density,
                          std::uint64_t seed, double lower_cutoff = 0);

/// {p sqrt 2} <= 1/2, exact for p < 2^31.
bool sqrt2_member(std::uint64_t p);

/// T*(alpha) by direct summation, phases reduced in extended precision.
cplx exp_sum_at(const PrimeSubset& s, double alpha);
/// T*(a/q) with phases reduced exactly modulo q.
cplx exp_sum_at(const PrimeSubset& s, std::int64_t a, std::int64_t q);
/// |T*(alpha)|.
double exp_sum_abs(const PrimeSubset& s, double alpha);

/// T*(j/G) for 0 <= j < G from one real-to-complex FFT (half spectrum stored).
class SpectrumGrid {
 public:
  /// Throws std::domain_error unless G is a power of two with G >= N.
  SpectrumGrid(const PrimeSubset& s, std::uint64_t G);

  std::uint64_t size() const { return G_; }
  /// T*(j / G), any 0 <= j < G.
  cplx value(std::uint64_t j) const;
  double abs(std::uint64_t j) const { return std::abs(value(j)); }
  double T0() const { return t0_; }

 private:
  std::uint64_t G_;
  double t0_;
  std::vector<cplx> half_;  // j = 0 .. G/2
};

/// Smallest power of two >= factor * N.
std::uint64_t default_grid_size(std::uint64_t N, std::uint64_t factor = 32);

/// (1/G) sum_j |T*(j/G)|.
double l1_estimate(const SpectrumGrid& grid);

/// sum_{n <= M, (n, P) = 1} e(n theta) where P is the product of sift_primes,
/// by Mobius inversion over d | P with closed-form geometric sums.
cplx sifted_exp_sum(std::uint64_t M, std::span<const std::uint64_t> sift_primes,
                    long double theta);
/// #{n <= M : (n, P) = 1}.
std::uint64_t sifted_count(std::uint64_t M, std::span<const std::uint64_t> sift_primes);

/// (1 / (V(z0) log N)) sum_{n <= N, (n, P(z0)) = 1} e(n alpha).
cplx local_model_full(const PrimeContext& ctx, std::uint64_t N, double z0, double alpha);

/// Fejer-weighted Fourier truncation of the indicator of the arc [lo, lo + len].
class IntervalPolynomial {
 public:
  IntervalPolynomial(double lo, double len, int H);

  int degree() const { return H_; }
  double lo() const { return lo_; }
  double length() const { return len_; }
  /// a_H(h) for |h| <= H.
  cplx coeff(int h) const { return coeffs_[static_cast<std::size_t>(h + H_)]; }
  /// sum_h a_H(h) e(h x).
  double eval(double x) const;
  bool contains(double x) const;
  /// Bound on |eval(x) - 1_I(x)| from the Fejer kernel tail.
  double error_envelope(double x) const;

 private:
  double lo_, len_;
  int H_;
  std::vector<cplx> coeffs_;
};

/// Throws std::domain_error unless H >= 1 and 0 <= len <= 1.
IntervalPolynomial vaaler_coeffs(double lo, double len, int H);

/// Local model of the primes with {p sqrt 2} <= 1/2: the main term is half of
/// the full model, plus sum over odd |h| <= H of (1/(i pi h)) times the sifted
/// sum at h sqrt 2 + alpha, all divided by V(z0) log N.
cplx local_model_sqrt2(const PrimeContext& ctx, std::uint64_t N, double z0, int H,
                       double alpha);

}  // namespace cuspsieve
