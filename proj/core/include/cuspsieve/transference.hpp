#pragma once

// Transference: a finite cover Xi of the A-cusps, the Bohr set B_M(eps) it
// defines, the autocorrelation measure rho of B_M, and the decomposition
//
//   f = f_flat / (V(z0) log N) + f_sharp,   f_flat = f* V(z0) log N / G(z; z0),
//   f* = G(z; z0) (f conv rho),
//
// of the indicator f of a prime subset.

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <vector>

#include "cuspsieve/arith.hpp"
#include "cuspsieve/cusps.hpp"
#include "cuspsieve/enveloping_sieve.hpp"
#include "cuspsieve/exp_sums.hpp"
#include "cuspsieve/report.hpp"

namespace cuspsieve {

/// Points y = num / D with D = Nprime * samples, one per interval
/// [(a-1)/N', a/N') whose best sample reaches T*(0)/A.
struct Cover {
  double A = 1.0;
  std::uint64_t N = 0;
  std::uint64_t Nprime = 0;  // 240 N A
  double eps = 0.0;          // 1 / (240 A)
  std::uint64_t samples = 1;
  std::uint64_t D = 0;
  std::vector<std::uint64_t> num;     // ascending numerators of Xi
  std::vector<std::uint8_t> even;     // interval index a is even
  std::vector<double> height;         // |T*(y)| / T*(0)
  std::size_t even_count = 0, odd_count = 0;
  CuspReport cusps;                   // arcs the cover was sampled on

  std::size_t size() const { return num.size(); }
  double position(std::size_t i) const {
    return static_cast<double>(num[i]) / static_cast<double>(D);
  }
  /// 5000 A^3 K log(2A).
  double family_bound() const;
};

/// Samples |T*| at spacing 1/(N' samples) over every arc found on grid (padded
/// by two intervals) and keeps the best sample of each interval. Throws
/// parameter_error unless 240 N A is an integer.
Cover build_cover(const SpectrumGrid& grid, const PrimeSubset& s, double A,
                  std::uint64_t samples = 1);

/// Family sizes against 5000 A^3 K log(2A), and every well-spaced cusp within
/// 1/N' + 1/(1024 N) of a point of Xi.
CheckReport cover_report(const Cover& cover);

struct BohrSet {
  std::uint64_t M = 1;
  std::uint64_t N = 0;
  double eps = 0.0;
  std::vector<std::uint64_t> elements;  // ascending, 1 <= b <= N
  std::vector<std::uint64_t> xi_M;      // distinct numerators of M y mod 1, over cover.D
  bool h1 = false;                      // every p | M is < z0 and P(z0) | M
  CheckReport checks;                   // H1 gate and the size lower bound

  std::size_t size() const { return elements.size(); }
};

/// {1 <= n <= N : M | n, ||y n|| <= eps for all y in Xi}, decided in integers.
/// Throws std::domain_error when empty, std::invalid_argument when M = 0.
BohrSet build_bohr(const PrimeContext& ctx, const Cover& cover, std::uint64_t M, double z0);

/// S_M(alpha) = sum_{b in B} e(b alpha).
cplx bohr_sum(const BohrSet& bohr, double alpha);

/// rho(m) = #{b1 - b2 = m} / |B|^2, exactly.
mpq_class rho(const BohrSet& bohr, std::int64_t m);

/// All pair counts #{b1 - b2 = m} for |m| <= span; rho(m) = count / |B|^2.
struct RhoTable {
  std::int64_t span = 0;
  std::uint64_t size = 0;             // |B|
  std::vector<std::uint64_t> counts;  // index m + span
  std::uint64_t count(std::int64_t m) const;
  double operator()(std::int64_t m) const;
};

/// Direct double loop when |B| <= direct_max, FFT self-correlation otherwise.
RhoTable rho_table(const BohrSet& bohr, std::size_t direct_max = 10'000);

/// G (f conv rho)(ell); zero outside [min p - span, max p + span].
double f_star(const PrimeSubset& s, double G, const RhoTable& rho, std::int64_t ell);
/// Same, with G = G(z; z0) taken from tau = 1 weights.
double f_star(const PrimeSubset& s, const SieveWeights& w, const RhoTable& rho,
              std::int64_t ell);

struct DecomposeParams {
  double z0 = 3.0;
  double z = 0.0;           // 0 means sqrt(N / (M z0))
  std::uint64_t M = 0;      // 0 means P(z0)
  double A = 4.0;
  std::uint64_t grid_factor = 32;
  std::uint64_t samples = 1;
  std::size_t alpha_samples = 1000;
  std::size_t rho_direct_max = 10'000;
  std::uint64_t seed = 42;
};

struct DecomposeMetrics {
  double residual_max = 0.0;              // |f - f_flat/(V log N) - f_sharp|
  std::size_t flat_coprime_violations = 0;
  double flat_min = 0.0, flat_max = 0.0;
  double flat_bound = 0.0;                // 2 (1 + eps)^2
  double star_rational_max = 0.0;         // |S(f*, a/M) - G T*(a/M)| / (G T*(0))
  double star_identity_max = 0.0;         // |S(f*, a) - G T* |S_M/|B||^2| / (G T*(0))
  double sharp_identity_max = 0.0;        // |S(f_sharp, a) - T* (1 - |S_M/|B||^2)| / T*(0)
  std::size_t sharp_le_T_violations = 0;  // |S(f_sharp)| > |T*|
  std::size_t flat_le_T_violations = 0;   // |S(f_flat)| > |T*| V log N
  double truncation_max = 0.0;            // |S over [1, N] - S over full support| / (G T*(0))
  double sup_sharp = 0.0;                 // max over a grid of |S(f_sharp)| / T*(0)
  double target = 0.0;                    // 1 / A
  std::size_t alpha_samples = 0;
  std::uint64_t sup_grid = 0;
};

struct Decomposition {
  std::uint64_t N = 0;
  double z0 = 0.0, z = 0.0;
  std::uint64_t M = 1;
  double A = 0.0, eps = 0.0;
  std::uint64_t seed = 0;
  double G = 0.0, V = 0.0;
  bool h1 = false, h2 = false;
  double log10_z0_regime = 0.0;  // log10 of exp(25000 A^3 K (log 2A)^2) / eps
  std::int64_t lmin = 0;         // f_* arrays cover [lmin, lmin + size)
  std::vector<double> f, f_star, f_flat, f_sharp;
  Cover cover;
  BohrSet bohr;
  RhoTable rho;
  DecomposeMetrics metrics;

  std::int64_t lmax() const { return lmin + static_cast<std::int64_t>(f.size()) - 1; }
  /// Identity, support and transform checks, plus the measured report rows.
  CheckReport checks() const;
};

/// Throws parameter_error when z < sqrt(N / (M z0)) or the subset starts below
/// z; std::domain_error when the Bohr set is empty.
Decomposition decompose(const PrimeContext& ctx, const PrimeSubset& s,
                        const DecomposeParams& params);

/// |S_M(y)/|B| - 1| <= 7 eps at every y in Xi and <= 14 eps at y +- eps/N,
/// plus |S(f_sharp, y)| / T*(0) against 1/A (measured).
CheckReport cusp_suppression_report(const Decomposition& d, const PrimeSubset& s);

/// |e(u) - 1| <= 2 pi ||u|| on fuzzed u.
CheckRow unit_chord_check(std::size_t trials, std::uint64_t seed);

/// Columns n,f,f_flat,f_sharp.
void write_decomposition_csv(std::ostream& os, const Decomposition& d);

}  // namespace cuspsieve
