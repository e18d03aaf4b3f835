#pragma once

// Numerical checkers for the explicit inequalities satisfied by G-functions,
// Mertens products and prime counts. Each checker scans its parameter range
// exhaustively where the quantities are step functions (reducing each real
// interval to its worst endpoint) and reports the worst margin. Checkers whose
// hypotheses cannot be met inside the configured range say so instead of
// passing vacuously.

#include <cstdint>
#include <vector>

#include "cuspsieve/arith.hpp"
#include "cuspsieve/report.hpp"

namespace cuspsieve {

/// Euler-Mascheroni constant and c0 = gamma + sum_p log p / (p (p - 1)).
inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kC0 = 1.332582275733;

struct EstimateRanges {
  std::uint64_t zmax = 100'000;          // largest argument of any G / product scan
  std::uint64_t square_zmax = 300;           // G(z^2) <= 2 G(z) for z in [2, square_zmax]
  std::vector<double> approx_points = {1e3, 1e4, 1e5};
  std::uint64_t vanlr_qmax = 30;
  std::uint64_t vanlr_zmax = 10'000;
  std::vector<double> vanlr_z0 = {2, 3, 5};
  std::vector<std::uint64_t> vanlr_tau = {1};
  std::uint64_t vanlr_exact_zmax = 200;  // exact-rational re-check of the chain
  std::uint64_t sifted_lower_prime_max = 200;
  std::uint64_t sifted_count_qmax = 4'000'000;
  double term_cap = 1e9;                 // largest admissible l-sum length
};

// Individual checkers. ctx must cover the scanned range (zmax, and
// square_zmax^2 + 2 square_zmax for the square check).
CheckReport check_g_asymptotic(const PrimeContext& ctx, const EstimateRanges& r);
CheckReport check_g_square(const PrimeContext& ctx, const EstimateRanges& r);
CheckRow check_squarefree_count(const PrimeContext& ctx, const EstimateRanges& r);
CheckReport check_mertens_lower(const PrimeContext& ctx, const EstimateRanges& r);
CheckRow check_log_sum(const PrimeContext& ctx, const EstimateRanges& r);
CheckReport check_z0_vs_log_z(const PrimeContext& ctx, const EstimateRanges& r);
CheckReport check_sifted_count(const PrimeContext& ctx, const EstimateRanges& r);
CheckRow check_g_sifted_lower(const PrimeContext& ctx, const EstimateRanges& r);
CheckReport check_van_lint_richert(const PrimeContext& ctx, const EstimateRanges& r);
CheckReport check_rosser_schoenfeld(const PrimeContext& ctx, const EstimateRanges& r);
/// g-square-upper, g-sifted-lower-large, g-square-ratio, g-tau-ratio: hypothesis-gated on z0 >= 35, P(z0) <= z.
CheckReport check_large_z0(const PrimeContext& ctx, const EstimateRanges& r);

/// All of the above, in a fixed order.
CheckReport verify_explicit_estimates(const PrimeContext& ctx,
                                      const EstimateRanges& r = {});

/// log P(z0) = sum_{p < z0} log p (used by the hypothesis gates).
double log_primorial(const PrimeContext& ctx, double z0);

}  // namespace cuspsieve
