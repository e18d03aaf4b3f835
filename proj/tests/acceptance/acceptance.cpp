// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cuspsieve/cusps.hpp"
#include "cuspsieve/enveloping_sieve.hpp"
#include "cuspsieve/estimates.hpp"
#include "cuspsieve/exp_sums.hpp"
#include "cuspsieve/transference.hpp"

namespace cs = cuspsieve;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

const cs::PrimeContext& ctx() {
  static const cs::PrimeContext c(100'000);
  return c;
}

bool row_passes(const cs::CheckRow& r) { return r.status == cs::CheckStatus::pass; }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

void note_failure(Outcome& o, const std::string& what) {
  o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what;
}

// beta_direct = beta_fourier exactly for n <= 2000 over 27 parameter sets.
Outcome fourier_equivalence() {
  Outcome o;
  std::uint64_t checked = 0;
  for (const double z0 : {2.0, 3.0, 5.0})
    for (const double z : {20.0, 30.0, 50.0})
      for (const std::uint64_t tau : {1u, 5u, 7u}) {
        cs::SieveParams p;
        p.z0 = z0;
        p.z = z;
        p.tau = tau;
        const auto fc = cs::check_fourier_equivalence(cs::build_weights(ctx(), p), 2000);
        checked += fc.checked;
        if (fc.mismatches != 0)
          note_failure(o, "z0=" + fmt(z0) + " z=" + fmt(z) + " tau=" + std::to_string(tau) +
                              " first mismatch n=" + std::to_string(fc.first_mismatch));
      }
  if (o.pass) o.detail = std::to_string(checked) + " exact comparisons";
  return o;
}

// beta(p) = 1 for primes in (z, 1e5], beta >= 0 on [1, 1e5].
Outcome enveloping() {
  Outcome o;
  cs::SieveParams p;
  p.z0 = 3;
  p.z = 50;
  const auto rows = cs::enveloping_report(ctx(), cs::build_weights(ctx(), p), 100'000);
  for (const auto& r : rows)
    if (!row_passes(r)) note_failure(o, r.lemma + " lhs=" + fmt(r.lhs));
  if (o.pass) o.detail = std::to_string(rows.size()) + " exact rows over n <= 100000";
  return o;
}

std::vector<cs::PrimeSubset> subsets(std::uint64_t N) {
  std::vector<cs::PrimeSubset> out;
  out.push_back(cs::subset_full(ctx(), N));
  out.push_back(cs::subset_sqrt2(ctx(), N));
  out.push_back(cs::subset_random(ctx(), N, 0.5, 42));
  return out;
}

struct CuspGrid {
  Outcome count, symmetry;
};

// Criteria 3 and 4 share the cusp extraction.
CuspGrid cusp_grid() {
  CuspGrid g;
  double worst_ratio = 0.0;
  std::size_t runs = 0, sym_rows = 0;
  for (const std::uint64_t N : {10'000u, 100'000u})
    for (const auto& s : subsets(N)) {
      const cs::SpectrumGrid grid(s, cs::default_grid_size(N));
      for (const double A : {2.0, 4.0, 8.0, 16.0}) {
        const auto rep = cs::find_cusps(grid, s, A);
        ++runs;
        const double count = static_cast<double>(rep.wellspaced.size());
        worst_ratio = std::max(worst_ratio, count / rep.bound);
        if (!rep.bound_holds())
          note_failure(g.count, std::string(cs::to_string(s.kind)) + " N=" + std::to_string(N) +
                                    " A=" + fmt(A) + " count=" + fmt(count));
        for (const auto& r : cs::structure_check(ctx(), rep, s)) {
          if (r.lemma != "cusp-symmetry-negation" && r.lemma != "cusp-symmetry-half-shift") continue;
          ++sym_rows;
          if (!row_passes(r))
            note_failure(g.symmetry, r.lemma + " " + std::string(cs::to_string(s.kind)) +
                                         " N=" + std::to_string(N) + " A=" + fmt(A));
        }
      }
    }
  if (g.count.pass)
    g.count.detail = std::to_string(runs) + " runs, max count/bound " + fmt(worst_ratio);
  if (g.symmetry.pass) g.symmetry.detail = std::to_string(sym_rows) + " symmetry rows, 0 violations";
  return g;
}

// 200 seeded trials at N = 1e4, primal and dual forms.
Outcome large_sieve() {
  Outcome o;
  const auto s = cs::subset_full(ctx(), 10'000);
  for (const auto& r : cs::large_sieve_trials(ctx(), s, 200, 42)) {
    if (!row_passes(r)) note_failure(o, r.lemma + " lhs=" + fmt(r.lhs) + " rhs=" + fmt(r.rhs));
    else o.detail += (o.detail.empty() ? "" : ", ") + r.lemma + " worst " + fmt(r.lhs / r.rhs);
  }
  return o;
}

// G asymptotic at 1e3, 1e4, 1e5, and the square, prime and Mertens-product scans.
Outcome g_functions() {
  Outcome o;
  const cs::EstimateRanges r;
  cs::CheckReport rows;
  for (auto& row : cs::check_g_asymptotic(ctx(), r))
    if (row.lemma == "g-asymptotic-point") rows.push_back(std::move(row));
  for (auto& row : cs::check_g_square(ctx(), r)) rows.push_back(std::move(row));
  rows.push_back(cs::check_squarefree_count(ctx(), r));
  for (auto& row : cs::check_mertens_lower(ctx(), r)) rows.push_back(std::move(row));
  std::size_t passed = 0;
  for (const auto& row : rows) {
    if (row.status == cs::CheckStatus::fail)
      note_failure(o, row.lemma + " lhs=" + fmt(row.lhs) + " rhs=" + fmt(row.rhs));
    else
      ++passed;
  }
  o.detail = std::to_string(passed) + "/" + std::to_string(rows.size()) + " rows hold" +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// Decomposition identities at N = 1e5, z0 = 3, M = 2, A = 4.
Outcome transference() {
  Outcome o;
  const std::uint64_t N = 100'000;
  cs::DecomposeParams p;
  p.z0 = 3;
  p.M = 2;
  p.A = 4;
  const double z = std::sqrt(static_cast<double>(N) / 6.0);
  const auto s = cs::subset_full(ctx(), N, std::max(std::sqrt(static_cast<double>(N)), std::floor(z) + 1));
  const auto d = cs::decompose(ctx(), s, p);
  const std::vector<std::string> asserted{"decompose-reconstruction", "decompose-flat-support",
                                          "decompose-star-rational", "decompose-sharp-identity"};
  double sup = -1.0;
  for (const auto& r : d.checks()) {
    if (r.lemma == "decompose-sharp-sup") sup = r.lhs;
    if (std::find(asserted.begin(), asserted.end(), r.lemma) == asserted.end()) continue;
    if (!row_passes(r)) note_failure(o, r.lemma + " lhs=" + fmt(r.lhs));
  }
  const auto& m = d.metrics;
  if (o.pass)
    o.detail = "residual " + fmt(m.residual_max) + ", flat exceptions " +
               std::to_string(m.flat_coprime_violations) + ", star-rational " +
               fmt(m.star_rational_max) + ", sharp identity " + fmt(m.sharp_identity_max) +
               " over " + std::to_string(m.alpha_samples) + " alpha";
  o.detail += "; sup |S(f_sharp)|/T*(0) = " + fmt(sup) + " against 1/A = 0.25 (reported)";
  return o;
}

// Local model error at Farey points with q <= 30, z0 = 3, 5, 7.
Outcome local_model() {
  Outcome o;
  const std::uint64_t N = 100'000;
  const auto all = cs::subset_full(ctx(), N, 2);
  const auto farey = cs::farey_points(30);
  std::vector<double> medians;
  std::string trail;
  for (const double z0 : {3.0, 5.0, 7.0}) {
    std::vector<double> e;
    for (const auto& f : farey)
      e.push_back(std::abs(cs::exp_sum_at(all, f.a, f.q) - cs::local_model_full(ctx(), N, z0, f.position())));
    std::sort(e.begin(), e.end());
    medians.push_back(e[e.size() / 2]);
    trail += (trail.empty() ? "" : ", ") + std::string("z0=") + fmt(z0) + " median " +
             fmt(e[e.size() / 2]) + " max " + fmt(e.back());
  }
  for (std::size_t i = 1; i < medians.size(); ++i)
    if (medians[i] > medians[i - 1]) note_failure(o, "median increased");
  const double pi = static_cast<double>(all.members.size());
  const double rel = std::abs(cs::local_model_full(ctx(), N, 7, 0.0).real() - pi) / pi;
  if (rel > 0.15) note_failure(o, "model(0) off by " + fmt(rel));
  o.detail += (o.detail.empty() ? "" : "; ") + trail + "; model(0) within " + fmt(rel) + " of pi(N)";
  return o;
}

// FFT grid against direct evaluation, N = 1e5, G = 2^20.
Outcome spectrum() {
  Outcome o;
  const std::uint64_t N = 100'000, G = 1u << 20;
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::uint64_t> pick(0, G - 1);
  double worst = 0.0;
  for (const auto& s : subsets(N)) {
    const cs::SpectrumGrid grid(s, G);
    for (int i = 0; i < 100; ++i) {
      const auto j = pick(rng);
      const double alpha = static_cast<double>(j) / static_cast<double>(G);
      const double err = std::abs(grid.value(j) - cs::exp_sum_at(s, alpha)) / s.T0();
      worst = std::max(worst, err);
      if (err > 1e-6)
        note_failure(o, std::string(cs::to_string(s.kind)) + " alpha=" + fmt(alpha) + " err=" + fmt(err));
    }
  }
  if (o.pass) o.detail = "300 points, max error " + fmt(worst) + " T*(0)";
  return o;
}

// Coefficient bounds on 1000 fuzzed intervals and degrees.
Outcome vaaler() {
  Outcome o;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> deg(1, 200);
  for (int t = 0; t < 1000 && o.pass; ++t) {
    const double lo = unit(rng), len = unit(rng);
    const int H = deg(rng);
    const auto P = cs::vaaler_coeffs(lo, len, H);
    if (P.coeff(0) != cs::cplx(len, 0.0)) note_failure(o, "a_H(0) != |I| at trial " + std::to_string(t));
    for (int h = 1; h <= H; ++h) {
      const double bound = std::min(len, 1.0 / (M_PI * h)) * (1.0 + 1e-12);
      if (std::abs(P.coeff(h)) > bound || std::abs(P.coeff(-h)) > bound) {
        note_failure(o, "trial " + std::to_string(t) + " h=" + std::to_string(h));
        break;
      }
    }
  }
  if (o.pass) o.detail = "1000 trials";
  return o;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  bool all = true;
  auto report = [&](int id, Outcome o, double secs, double limit) {
    if (limit > 0 && secs > limit) note_failure(o, "over the time limit");
    all = all && o.pass;
    std::printf("criterion %d: %s  %s  [%.1fs", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    if (limit > 0) std::printf(", limit %.0fs", limit);
    std::printf("]\n");
    std::fflush(stdout);
  };
  auto timed = [&](int id, double limit, const std::function<Outcome()>& f) {
    const auto t0 = clock::now();
    const auto o = f();
    report(id, o, std::chrono::duration<double>(clock::now() - t0).count(), limit);
  };

  ctx();
  timed(1, 30, fourier_equivalence);
  timed(2, 0, enveloping);
  const auto t0 = clock::now();
  const auto cg = cusp_grid();
  const double cusp_secs = std::chrono::duration<double>(clock::now() - t0).count();
  report(3, cg.count, cusp_secs, 120);
  report(4, cg.symmetry, cusp_secs, 0);
  timed(5, 60, large_sieve);
  timed(6, 0, g_functions);
  timed(7, 0, transference);
  timed(8, 0, local_model);
  timed(9, 10, spectrum);
  timed(10, 0, vaaler);
  return all ? 0 : 1;
}
