#pragma once

// A-cusps: the arcs of R/Z where |T*(alpha)| >= T*(0) / A, their well-spaced
// subsets, and the large sieve inequalities that bound how many there are.

#include <cstdint>
#include <span>
#include <vector>

#include "cuspsieve/arith.hpp"
#include "cuspsieve/enveloping_sieve.hpp"
#include "cuspsieve/exp_sums.hpp"
#include "cuspsieve/report.hpp"

namespace cuspsieve {

/// A closed arc [lo, hi] of R/Z; wraps through 0 when hi < lo.
struct CuspArc {
  double lo = 0.0;
  double hi = 0.0;
  WeightedPoint peak;  // weight = |T*| / T*(0)

  double length() const;
  bool contains(double x, double tol = 0.0) const;
};

struct CuspOptions {
  double endpoint_tol = 1.0 / 1024.0;   // arc endpoints refined to endpoint_tol / N
  double merge_gap = 0.25;              // arcs closer than merge_gap / N are merged
  double near_peak_fraction = 0.9;      // grid maxima above this share of the threshold are refined
};

struct CuspReport {
  double A = 1.0;
  double K = 0.0;
  std::uint64_t N = 0;
  double T0 = 0.0;
  std::vector<CuspArc> arcs;               // sorted by lo
  std::vector<WeightedPoint> wellspaced;   // (1/N)-well spaced, every point a cusp
  double bound = 0.0;                      // 19 A^2 K log(2A)
  double measure_estimate = 0.0;           // total arc length

  bool bound_holds() const { return static_cast<double>(wellspaced.size()) <= bound; }
  /// Index of an arc containing x (within tol), or -1.
  std::ptrdiff_t find_arc(double x, double tol = 0.0) const;
};

/// Throws std::domain_error for A < 1 and precondition_error when the grid
/// oversamples N by less than 8.
CuspReport find_cusps(const SpectrumGrid& grid, const PrimeSubset& s, double A,
                      const CuspOptions& opt = {});

/// sum over squarefree q with phi(q) <= A of phi(q): the number of reduced
/// fractions expected to carry an A-cusp for the full set of primes.
std::uint64_t farey_cusp_prediction(const PrimeContext& ctx, double A);

/// Symmetry under alpha -> -alpha and alpha -> 1/2 + alpha of every
/// well-spaced cusp, and the existence of a cusp among xi + a/q for each
/// squarefree q < sqrt N with phi(q) <= A T*(0) / |T*(xi)|, for each xi given.
CheckReport structure_check(const PrimeContext& ctx, const CuspReport& report,
                            const PrimeSubset& s, std::span<const double> xis = {});

struct CompanionResult {
  std::vector<FareyPoint> offsets;  // a/q with xi + a/q an A-cusp
  std::vector<double> heights;      // t* at those points
  double Z = 0.0;
  double bound = 0.0;  // A^2 / (6800 B^4 Z^2 K log A)
  bool holds() const { return static_cast<double>(offsets.size()) > bound; }
};

/// Throws precondition_error unless N >= 1e4, 2 <= A <= sqrt N, 1 <= B <= A
/// and |T*(xi)| >= T*(0) / B.
CompanionResult companion_search(const PrimeSubset& s, double xi, double A, double B);

struct LargeSieveResult {
  double primal_lhs = 0.0, primal_rhs = 0.0;  // sum_x |S(x)|^2 vs 19 (N + 1/delta) log(2|X|) ||u||^2 / log N
  double dual_lhs = 0.0, dual_rhs = 0.0;      // sum_{p <= N} |sum_x f(x) e(xp)|^2 vs 19 (N + 1/delta) ||f||_2^2 log(2 ||f||_1^2 / ||f||_2^2) / log N
  double V = 0.0;
  std::vector<double> level_A;                   // tested A values
  std::vector<std::uint64_t> level_count;        // #{x : |S(x)| >= V / A}
  std::vector<double> level_bound;               // 19 A^2 log(2A)
  bool primal_ok() const { return primal_lhs <= primal_rhs; }
  bool dual_ok() const { return dual_lhs <= dual_rhs; }
  bool levels_ok() const;
};

/// u[i] is the coefficient of s.members[i]. f defaults to f(x) = S(x).
/// Throws precondition_error when the points are not delta-well spaced or N < 1e4.
LargeSieveResult large_sieve_check(const PrimeContext& ctx, std::span<const double> points,
                                   std::span<const cplx> u, const PrimeSubset& s, double delta,
                                   std::span<const cplx> f = {});

/// Seeded random trials of large_sieve_check on s: random delta = k/N (k <= 8),
/// random well-spaced points, random complex u, and f = S or random. One row
/// each for the primal form, the dual form and the level-set counts, at the
/// worst trial. Trial t draws from mt19937_64(seed + t).
CheckReport large_sieve_trials(const PrimeContext& ctx, const PrimeSubset& s,
                               std::size_t trials, std::uint64_t seed);

/// Both sides of sum_{Q1 <= q <= Q2} (1/q) sum_{a mod* q Delta} |sum_n u_n e(na/(q Delta))|^2
/// <= (N/Q1 + 2 Delta Q2) sum |u_n|^2; u[n-1] is u_n.
struct SpacedModuliResult {
  double lhs = 0.0, rhs = 0.0;
  bool ok() const { return lhs <= rhs; }
};
SpacedModuliResult spaced_moduli_check(std::span<const cplx> u, double Q1, double Q2, std::uint64_t Delta);

/// Random u of length N, random 1 <= Q1 <= Q2 <= sqrt N and Delta in {1, 2, 3}.
CheckRow spaced_moduli_trials(std::uint64_t N, std::size_t trials, std::uint64_t seed);

/// sum_{z1 <= q <= z^2} |G w_q| sum_{a mod* q} |sum_n u_n e(na/q)|^2 against
/// 13 (N/z1 + z^2 / log(3 z0)) sum |u_n|^2. The inequality is asserted only when
/// its hypotheses hold; otherwise the row is NOT-APPLICABLE and a second,
/// report-only row carries the measured sums.
CheckReport wq_large_sieve_check(const PrimeContext& ctx, const SieveWeights& w,
                                 std::span<const cplx> u, double z1);

}  // namespace cuspsieve
