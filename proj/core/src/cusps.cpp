#include "cuspsieve/cusps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cuspsieve/errors.hpp"
#include "cuspsieve/parallel.hpp"

namespace cuspsieve {

namespace {

// Arc in unwrapped coordinates (lo <= hi, possibly beyond 1).
struct RawArc {
  double lo, hi;
  double peak_pos, peak_val;
};

double golden_max(const PrimeSubset& s, double a, double b, double& best_val) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = exp_sum_abs(s, x1), f2 = exp_sum_abs(s, x2);
  for (int it = 0; it < 48 && b - a > 1e-15; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = exp_sum_abs(s, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = exp_sum_abs(s, x1);
    }
  }
  if (f1 >= f2) {
    best_val = f1;
    return x1;
  }
  best_val = f2;
  return x2;
}

// Moves the crossing between `below` and `above` (|T*(above)| >= thr) until
// they are within tol; returns the above-threshold end.
double bisect(const PrimeSubset& s, double below, double above, double thr, double tol) {
  while (std::abs(above - below) > tol) {
    const double mid = 0.5 * (above + below);
    if (exp_sum_abs(s, mid) >= thr)
      above = mid;
    else
      below = mid;
  }
  return above;
}

}  // namespace

double CuspArc::length() const {
  if (hi - lo >= 1.0) return 1.0;
  const double d = hi - lo;
  return d >= 0.0 ? d : d + 1.0;
}

bool CuspArc::contains(double x, double tol) const {
  if (length() >= 1.0) return true;
  const double off = reduce_mod1(x - lo);
  return off <= length() + tol || off >= 1.0 - tol;
}

std::ptrdiff_t CuspReport::find_arc(double x, double tol) const {
  for (std::size_t i = 0; i < arcs.size(); ++i)
    if (arcs[i].contains(x, tol)) return static_cast<std::ptrdiff_t>(i);
  return -1;
}

CuspReport find_cusps(const SpectrumGrid& grid, const PrimeSubset& s, double A,
                      const CuspOptions& opt) {
  if (!(A >= 1.0)) throw std::domain_error("find_cusps: A must be >= 1");
  const std::uint64_t G = grid.size();
  const std::uint64_t N = s.N;
  if (G < 8 * N) throw precondition_error("find_cusps: grid must oversample N by at least 8");

  CuspReport rep;
  rep.A = A;
  rep.K = s.K;
  rep.N = N;
  rep.T0 = s.T0();
  rep.bound = 19.0 * A * A * s.K * std::log(2.0 * A);
  const double thr = rep.T0 / A;
  const double Nd = static_cast<double>(N);
  const double Gd = static_cast<double>(G);
  const double tol = opt.endpoint_tol / Nd;

  std::uint64_t start = G;
  for (std::uint64_t j = 0; j < G; ++j)
    if (grid.abs(j) < thr) {
      start = j;
      break;
    }

  std::vector<RawArc> raw;
  if (start == G) {
    rep.arcs.push_back({0.0, 1.0, {0.0, 1.0}});
  } else {
    // Scan one full turn from a sub-threshold index, in unwrapped indices.
    bool in_run = false;
    std::uint64_t run_a = 0, best = 0;
    double best_val = 0.0, prev = grid.abs(start);
    for (std::uint64_t k = start + 1; k <= start + G; ++k) {
      const double v = grid.abs(k % G);
      if (v >= thr) {
        if (!in_run) {
          in_run = true;
          run_a = k;
          best = k;
          best_val = v;
        } else if (v > best_val) {
          best = k;
          best_val = v;
        }
      } else {
        if (in_run) {
          in_run = false;
          const std::uint64_t run_b = k - 1;
          RawArc arc;
          arc.lo = bisect(s, (run_a - 1) / Gd, run_a / Gd, thr, tol);
          arc.hi = bisect(s, k / Gd, run_b / Gd, thr, tol);
          double pv = 0.0;
          const double pp = golden_max(s, (best - 1) / Gd, (best + 1) / Gd, pv);
          const double direct = exp_sum_abs(s, best / Gd);
          arc.peak_pos = pv >= direct ? pp : best / Gd;
          arc.peak_val = std::max(pv, direct);
          raw.push_back(arc);
        } else {
          // Grid local maximum just under the threshold: the true peak may cross it.
          const double next = grid.abs((k + 1) % G);
          if (v >= opt.near_peak_fraction * thr && v >= prev && v >= next) {
            double pv = 0.0;
            const double pp = golden_max(s, (k - 1) / Gd, (k + 1) / Gd, pv);
            if (pv >= thr) {
              RawArc arc;
              arc.lo = bisect(s, (k - 1) / Gd, pp, thr, tol);
              arc.hi = bisect(s, (k + 1) / Gd, pp, thr, tol);
              arc.peak_pos = pp;
              arc.peak_val = pv;
              raw.push_back(arc);
            }
          }
        }
      }
      prev = v;
    }
    std::sort(raw.begin(), raw.end(),
              [](const RawArc& l, const RawArc& r) { return l.lo < r.lo; });
    std::vector<RawArc> merged;
    const double gap = opt.merge_gap / Nd;
    for (const auto& a : raw) {
      if (!merged.empty() && a.lo - merged.back().hi < gap) {
        auto& m = merged.back();
        m.hi = std::max(m.hi, a.hi);
        if (a.peak_val > m.peak_val) {
          m.peak_val = a.peak_val;
          m.peak_pos = a.peak_pos;
        }
      } else {
        merged.push_back(a);
      }
    }
    if (merged.size() > 1 && merged.front().lo + 1.0 - merged.back().hi < gap) {
      auto& f = merged.front();
      const auto& l = merged.back();
      f.lo = l.lo - 1.0;
      if (l.peak_val > f.peak_val) {
        f.peak_val = l.peak_val;
        f.peak_pos = l.peak_pos;
      }
      merged.pop_back();
    }
    for (const auto& m : merged) {
      CuspArc arc;
      const double len = m.hi - m.lo;
      arc.lo = reduce_mod1(m.lo);
      arc.hi = len >= 1.0 ? arc.lo + 1.0 : reduce_mod1(m.hi);
      arc.peak = {reduce_mod1(m.peak_pos), m.peak_val / rep.T0};
      rep.arcs.push_back(arc);
    }
    std::sort(rep.arcs.begin(), rep.arcs.end(),
              [](const CuspArc& l, const CuspArc& r) { return l.lo < r.lo; });
  }

  for (const auto& a : rep.arcs) rep.measure_estimate += a.length();

  // Candidates: peaks, endpoints and a 1/N lattice along every arc.
  std::vector<double> cand;
  for (const auto& a : rep.arcs) {
    cand.push_back(a.peak.position);
    cand.push_back(a.lo);
    cand.push_back(reduce_mod1(a.hi));
    const double len = a.length();
    for (double t = 1.0 / Nd; t < len; t += 1.0 / Nd) cand.push_back(reduce_mod1(a.lo + t));
  }
  std::vector<double> height(cand.size());
  parallel_for(0, cand.size(), [&](std::size_t i) { height[i] = exp_sum_abs(s, cand[i]); });
  std::vector<WeightedPoint> pts;
  for (std::size_t i = 0; i < cand.size(); ++i)
    if (height[i] >= thr) pts.push_back({cand[i], height[i] / rep.T0});
  rep.wellspaced = extract_well_spaced(pts, std::min(0.5, 1.0 / Nd));
  return rep;
}

std::uint64_t farey_cusp_prediction(const PrimeContext& ctx, double A) {
  std::uint64_t total = 0;
  // phi(q) >= sqrt(q / 2) bounds the search.
  const auto qmax = std::min<std::uint64_t>(ctx.limit(), static_cast<std::uint64_t>(2.0 * A * A + 2));
  for (std::uint64_t q = 1; q <= qmax; ++q) {
    if (!ctx.squarefree(q)) continue;
    const auto phi = ctx.euler_phi(q);
    if (static_cast<double>(phi) <= A) total += phi;
  }
  return total;
}

CheckReport structure_check(const PrimeContext& ctx, const CuspReport& report,
                            const PrimeSubset& s, std::span<const double> xis) {
  CheckReport out;
  const double T0 = s.T0();
  const double thr = T0 / report.A;
  const double slack = 1e-6 * T0;
  const double arc_tol = 2.0 / (1024.0 * static_cast<double>(s.N));
  WorstCase neg("cusp-symmetry-negation");
  WorstCase half("cusp-symmetry-half-shift");
  std::size_t neg_arc_miss = 0, half_arc_miss = 0;
  for (const auto& p : report.wellspaced) {
    const double x1 = reduce_mod1(-p.position);
    const double x2 = reduce_mod1(0.5 + p.position);
    neg.observe(thr - slack, exp_sum_abs(s, x1), {{"alpha", p.position}});
    half.observe(thr - slack, exp_sum_abs(s, x2), {{"alpha", p.position}});
    if (report.find_arc(x1, arc_tol) < 0) {
      ++neg_arc_miss;
      neg.observe(1.0, 0.0, {{"alpha", p.position}, {"arc_miss", 1.0}});
    }
    if (report.find_arc(x2, arc_tol) < 0) {
      ++half_arc_miss;
      half.observe(1.0, 0.0, {{"alpha", p.position}, {"arc_miss", 1.0}});
    }
  }
  out.push_back(neg.finish("direct re-evaluation and arc membership"));
  out.push_back(half.finish("direct re-evaluation and arc membership"));

  // For each xi: every admissible q needs some a with |T*(xi + a/q)| >= thr.
  WorstCase rational("cusp-rational-shift");
  const double sqrtN = std::sqrt(static_cast<double>(s.N));
  for (const double xi : xis) {
    const double t_xi = exp_sum_abs(s, xi);
    if (t_xi == 0.0) continue;
    for (std::uint64_t q = 1; static_cast<double>(q) < sqrtN && q <= ctx.limit(); ++q) {
      if (!ctx.squarefree(q)) continue;
      if (static_cast<double>(ctx.euler_phi(q)) > report.A * T0 / t_xi) continue;
      double best = 0.0;
      for (std::uint64_t a = 0; a < q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        best = std::max(best, exp_sum_abs(s, xi + static_cast<double>(a) / static_cast<double>(q)));
      }
      rational.observe(thr - slack, best, {{"xi", xi}, {"q", static_cast<double>(q)}});
    }
  }
  out.push_back(rational.finish());
  return out;
}

CompanionResult companion_search(const PrimeSubset& s, double xi, double A, double B) {
  const double sqrtN = std::sqrt(static_cast<double>(s.N));
  if (s.N < 10'000) throw precondition_error("companion_search: needs N >= 1e4");
  if (!(A >= 2.0 && A <= sqrtN)) throw precondition_error("companion_search: needs 2 <= A <= sqrt N");
  if (!(B >= 1.0 && B <= A)) throw precondition_error("companion_search: needs 1 <= B <= A");
  const double T0 = s.T0();
  if (exp_sum_abs(s, xi) < T0 / B)
    throw precondition_error("companion_search: xi is not a B-cusp");
  CompanionResult res;
  const auto qmax = static_cast<std::int64_t>(std::floor(A / B));
  for (std::int64_t q = 1; q <= qmax; ++q)
    for (std::int64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const double t = exp_sum_abs(s, xi + static_cast<double>(a) / static_cast<double>(q)) / T0;
      if (t >= 1.0 / A) {
        res.offsets.push_back({a, q});
        res.heights.push_back(t);
        res.Z = std::max(res.Z, t);
      }
    }
  res.bound = A * A / (6800.0 * std::pow(B, 4) * res.Z * res.Z * s.K * std::log(A));
  return res;
}

}  // namespace cuspsieve
