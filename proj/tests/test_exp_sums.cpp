#include <gtest/gtest.h>

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cuspsieve/exp_sums.hpp"
#include "oracles.hpp"

namespace cs = cuspsieve;

namespace {

const cs::PrimeContext& ctx() {
  static const cs::PrimeContext c(200'000);
  return c;
}

// {p sqrt 2} <= 1/2 with 256-bit floats.
bool sqrt2_oracle(std::uint64_t p) {
  mpf_class r(2, 256);
  r = sqrt(r) * static_cast<unsigned long>(p);
  mpf_class f(0, 256);
  f = r - floor(r);
  return f <= 0.5;
}

cs::PrimeSubset singleton(std::uint64_t p) {
  cs::PrimeSubset s;
  s.N = 2 * p;
  s.lower = p;
  s.members = {p};
  s.K = 1.0;
  return s;
}

}  // namespace

TEST(Subsets, FullAtOneHundred) {
  const auto s = cs::subset_full(ctx(), 100);
  ASSERT_EQ(s.members.size(), 21u);
  EXPECT_EQ(s.members.front(), 11u);
  EXPECT_EQ(s.members.back(), 97u);
  EXPECT_DOUBLE_EQ(s.T0(), 21.0);
  EXPECT_NEAR(s.K, 100.0 / (21.0 * std::log(100.0)), 1e-12);
}

TEST(Subsets, Sqrt2MembershipMatchesHighPrecision) {
  EXPECT_FALSE(cs::sqrt2_member(11));
  for (const auto p : ctx().primes()) ASSERT_EQ(cs::sqrt2_member(p), sqrt2_oracle(p)) << p;
  const auto s = cs::subset_sqrt2(ctx(), 100'000);
  for (const auto p : s.members) ASSERT_TRUE(sqrt2_oracle(p));
  EXPECT_FALSE(s.contains(11));
}

TEST(Subsets, RandomIsReproducible) {
  const auto a = cs::subset_random(ctx(), 50'000, 0.5, 42);
  const auto b = cs::subset_random(ctx(), 50'000, 0.5, 42);
  const auto c = cs::subset_random(ctx(), 50'000, 0.5, 43);
  EXPECT_EQ(a.members, b.members);
  EXPECT_NE(a.members, c.members);
  const auto full = cs::subset_full(ctx(), 50'000);
  const double frac = static_cast<double>(a.members.size()) / static_cast<double>(full.members.size());
  EXPECT_NEAR(frac, 0.5, 0.05);
  for (const auto p : a.members) ASSERT_TRUE(full.contains(p));
}

TEST(Subsets, InvariantsAndErrors) {
  for (const auto& s : {cs::subset_full(ctx(), 10'000), cs::subset_sqrt2(ctx(), 10'000),
                        cs::subset_random(ctx(), 10'000, 0.5, 1)}) {
    EXPECT_GT(s.K, 0.0);
    for (const auto p : s.members) {
      ASSERT_TRUE(ctx().is_prime(p));
      ASSERT_GE(p, 100u);
      ASSERT_LE(p, 10'000u);
    }
    EXPECT_TRUE(std::is_sorted(s.members.begin(), s.members.end()));
  }
  EXPECT_THROW(cs::subset_full(ctx(), 99), std::domain_error);
  EXPECT_THROW(cs::subset_random(ctx(), 1000, 0.0, 1), std::domain_error);
  EXPECT_EQ(cs::subset_full(ctx(), 1000, 2).members.front(), 2u);
}

TEST(ExpSum, TrivialValues) {
  const auto s = cs::subset_full(ctx(), 10'000);
  EXPECT_NEAR(cs::exp_sum_at(s, 0.0).real(), s.T0(), 1e-9);
  EXPECT_NEAR(cs::exp_sum_at(s, 0.5).real(), -s.T0(), 1e-9);
  EXPECT_NEAR(cs::exp_sum_at(s, 0.5).imag(), 0.0, 1e-9);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double a = u(rng);
    const auto t = cs::exp_sum_at(s, a);
    const auto tm = cs::exp_sum_at(s, 1.0 - a);
    EXPECT_NEAR(std::abs(t - std::conj(tm)), 0.0, 1e-8);
    EXPECT_LE(std::abs(t), s.T0() + 1e-9);
    EXPECT_NEAR(std::abs(t - oracle::exp_sum(s.members, a)), 0.0, 1e-8);
  }
}

TEST(ExpSum, RationalOverloadMatches) {
  const auto s = cs::subset_full(ctx(), 10'000);
  for (const auto& f : cs::farey_points(25)) {
    const auto exact = cs::exp_sum_at(s, f.a, f.q);
    const auto ref = oracle::exp_sum(s.members, static_cast<long double>(f.a) / f.q);
    ASSERT_NEAR(std::abs(exact - ref), 0.0, 1e-8);
  }
  // Every member is 1 or 2 mod 3, and both have cos(2 pi r / 3) = -1/2.
  EXPECT_NEAR(cs::exp_sum_at(s, 1, 3).real(), -s.T0() / 2, 1e-9);
}

TEST(Spectrum, GridInvariants) {
  const auto s = cs::subset_sqrt2(ctx(), 10'000);
  const cs::SpectrumGrid g(s, 1u << 16);
  EXPECT_EQ(g.size(), 1u << 16);
  EXPECT_NEAR(g.value(0).real(), s.T0(), 1e-9);
  EXPECT_NEAR(g.value(0).imag(), 0.0, 1e-9);
  for (std::uint64_t j = 1; j < g.size(); j += 97)
    ASSERT_NEAR(std::abs(g.value(g.size() - j) - std::conj(g.value(j))), 0.0, 1e-9);
}

TEST(Spectrum, MatchesDirectEvaluationForEverySubset) {
  std::mt19937_64 rng(9);
  for (const auto& s : {cs::subset_full(ctx(), 20'000), cs::subset_sqrt2(ctx(), 20'000),
                        cs::subset_random(ctx(), 20'000, 0.5, 42)}) {
    const cs::SpectrumGrid g(s, 1u << 18);
    std::uniform_int_distribution<std::uint64_t> j(0, g.size() - 1);
    for (int i = 0; i < 100; ++i) {
      const auto k = j(rng);
      const auto ref = oracle::exp_sum(s.members, static_cast<long double>(k) / g.size());
      ASSERT_LE(std::abs(g.value(k) - ref), 1e-6 * s.T0()) << k;
    }
  }
}

TEST(Spectrum, Preconditions) {
  const auto s = cs::subset_full(ctx(), 10'000);
  EXPECT_THROW(cs::SpectrumGrid(s, 8192), std::domain_error);   // below N
  EXPECT_THROW(cs::SpectrumGrid(s, 20'000), std::domain_error);  // not a power of two
  EXPECT_EQ(cs::default_grid_size(100'000), 1u << 22);
  EXPECT_EQ(cs::default_grid_size(10'000, 8), 1u << 17);
}

TEST(L1, SingletonHasUnitMass) {
  const auto s = singleton(101);
  const cs::SpectrumGrid g(s, 256);
  EXPECT_NEAR(cs::l1_estimate(g), 1.0, 1e-12);
}

TEST(L1, FullPrimesBandAndGridConvergence) {
  const auto s = cs::subset_full(ctx(), 100'000);
  const cs::SpectrumGrid g(s, 1u << 20), g2(s, 1u << 21);
  const double l1 = cs::l1_estimate(g);
  const double ratio = l1 / std::sqrt(1e5 / std::log(1e5));
  // Frozen from a one-time run at G = 2^20: 0.6876.
  EXPECT_NEAR(ratio, 0.6876, 0.06876);
  EXPECT_LT(std::abs(cs::l1_estimate(g2) - l1) / l1, 1e-3);
}

TEST(SiftedSums, MatchBruteForce) {
  const std::vector<std::uint64_t> sift{2, 3, 5};
  const std::uint64_t M = 5000;
  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = 1; n <= M; ++n)
    if (n % 2 && n % 3 && n % 5) ns.push_back(n);
  EXPECT_EQ(cs::sifted_count(M, sift), ns.size());
  for (const long double theta : {0.0L, 0.1L, 0.5L, 1.0L / 3.0L, 0.123456789L}) {
    const auto v = cs::sifted_exp_sum(M, sift, theta);
    EXPECT_NEAR(std::abs(v - oracle::exp_sum(ns, theta)), 0.0, 1e-7) << static_cast<double>(theta);
  }
}

TEST(LocalModel, TrivialPoints) {
  const std::uint64_t N = 100'000;
  for (const double z0 : {3.0, 5.0, 7.0}) {
    const auto sift = cs::primes_below(ctx(), z0);
    const double scale = cs::mertens_product_float(ctx(), z0) * std::log(static_cast<double>(N));
    const double count = static_cast<double>(cs::sifted_count(N, sift));
    EXPECT_NEAR(cs::local_model_full(ctx(), N, z0, 0.0).real(), count / scale, 1e-9 * count);
    EXPECT_NEAR(cs::local_model_full(ctx(), N, z0, 0.5).real(), -count / scale, 1e-6 * count);
  }
  const double pi = static_cast<double>(ctx().prime_count(N));
  EXPECT_LT(std::abs(cs::local_model_full(ctx(), N, 7, 0.0).real() - pi) / pi, 0.15);
}

TEST(LocalModel, Sqrt2DegenerateAndBand) {
  const std::uint64_t N = 100'000;
  const auto half = 0.5 * cs::local_model_full(ctx(), N, 5, 0.3);
  EXPECT_NEAR(std::abs(cs::local_model_sqrt2(ctx(), N, 5, 0, 0.3) - half), 0.0, 1e-9);
  const auto all = cs::subset_sqrt2(ctx(), N, 2);
  const double T0 = all.T0();
  // Frozen from a one-time run: relative gap 0.098 at H = 500.
  EXPECT_LT(std::abs(cs::local_model_sqrt2(ctx(), N, 5, 500, 0.0).real() - T0) / T0, 0.11);
}

TEST(LocalModel, Sqrt2MedianErrorDoesNotGrowWithDegree) {
  const std::uint64_t N = 100'000;
  const auto s = cs::subset_sqrt2(ctx(), N, 2);
  auto median = [&](int H) {
    std::vector<double> e;
    for (const auto& f : cs::farey_points(30))
      e.push_back(std::abs(cs::exp_sum_at(s, f.a, f.q) -
                           cs::local_model_sqrt2(ctx(), N, 5, H, f.position())));
    std::nth_element(e.begin(), e.begin() + e.size() / 2, e.end());
    return e[e.size() / 2];
  };
  EXPECT_LE(median(50), median(5));
}

TEST(Vaaler, HalfIntervalClosedForm) {
  const int H = 40;
  const auto P = cs::vaaler_coeffs(0.0, 0.5, H);
  EXPECT_EQ(P.coeff(0).real(), 0.5);
  for (int h = 1; h <= H; ++h) {
    const double fejer = 1.0 - static_cast<double>(h) / (H + 1);
    if (h % 2 == 0) {
      EXPECT_NEAR(std::abs(P.coeff(h)), 0.0, 1e-15) << h;
    } else {
      EXPECT_NEAR(std::abs(P.coeff(h)), fejer / (oracle::kPi * h), 1e-15) << h;
    }
  }
}

TEST(Vaaler, CoefficientBoundsFuzzed) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> lo(0.0, 1.0), len(0.0, 1.0);
  std::uniform_int_distribution<int> deg(1, 200);
  for (int t = 0; t < 1000; ++t) {
    const double L = len(rng);
    const int H = deg(rng);
    const auto P = cs::vaaler_coeffs(lo(rng), L, H);
    ASSERT_EQ(P.coeff(0).real(), L);
    ASSERT_EQ(P.coeff(0).imag(), 0.0);
    for (int h = 1; h <= H; ++h) {
      const double bound = std::min(L, 1.0 / (oracle::kPi * h));
      ASSERT_LE(std::abs(P.coeff(h)), bound * (1 + 1e-12));
      ASSERT_LE(std::abs(P.coeff(-h)), bound * (1 + 1e-12));
    }
  }
}

TEST(Vaaler, PointwiseErrorWithinEnvelope) {
  const auto P = cs::vaaler_coeffs(0.2, 0.3, 64);
  for (int i = 0; i < 10'000; ++i) {
    const double x = (i + 0.5) / 10'000.0;
    const double truth = P.contains(x) ? 1.0 : 0.0;
    ASSERT_LE(std::abs(P.eval(x) - truth), P.error_envelope(x) + 1e-12) << x;
  }
}

TEST(Vaaler, Preconditions) {
  EXPECT_THROW(cs::vaaler_coeffs(0.0, 0.5, 0), std::domain_error);
  EXPECT_THROW(cs::vaaler_coeffs(0.0, 1.5, 4), std::domain_error);
  EXPECT_THROW(cs::vaaler_coeffs(0.0, -0.1, 4), std::domain_error);
}
