#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cuspsieve/arith.hpp"
#include "cuspsieve/errors.hpp"
#include "oracles.hpp"

namespace cs = cuspsieve;

namespace {

const cs::PrimeContext& ctx() {
  static const cs::PrimeContext c(1'000'000);
  return c;
}

}  // namespace

TEST(PrimeContext, SmallLimits) {
  const cs::PrimeContext ten(10);
  EXPECT_EQ(std::vector<std::uint32_t>(ten.primes().begin(), ten.primes().end()),
            (std::vector<std::uint32_t>{2, 3, 5, 7}));
  const cs::PrimeContext two(2);
  ASSERT_EQ(two.primes().size(), 1u);
  EXPECT_EQ(two.primes()[0], 2u);
}

TEST(PrimeContext, RejectsBadLimits) {
  EXPECT_THROW(cs::PrimeContext(1), std::invalid_argument);
  EXPECT_THROW(cs::PrimeContext(1000, 100), cs::capacity_error);
}

TEST(PrimeContext, OutOfRangeQueriesThrow) {
  const cs::PrimeContext c(100);
  EXPECT_THROW(c.mobius(101), std::out_of_range);
  EXPECT_THROW(c.euler_phi(0), std::out_of_range);
}

TEST(PrimeContext, PrimeCountAtOneMillion) {
  EXPECT_EQ(ctx().prime_count(1'000'000), 78498u);
  EXPECT_EQ(cs::segmented_prime_count(1'000'000), 78498u);
  const auto seg = cs::segmented_primes(1'000'000);
  ASSERT_EQ(seg.size(), ctx().primes().size());
  EXPECT_TRUE(std::equal(seg.begin(), seg.end(), ctx().primes().begin()));
}

TEST(PrimeContext, AgreesWithTrialDivisionBelowTenThousand) {
  std::uint64_t count = 0;
  for (std::uint64_t n = 0; n <= 10'000; ++n) {
    ASSERT_EQ(ctx().is_prime(n), oracle::is_prime(n)) << n;
    if (oracle::is_prime(n)) ++count;
    ASSERT_EQ(ctx().prime_count(n), count) << n;
  }
}

TEST(PrimeContext, SmallestPrimeFactor) {
  for (std::uint64_t n = 2; n <= ctx().limit(); ++n) {
    const auto p = ctx().spf(n);
    ASSERT_EQ(n % p, 0u) << n;
    ASSERT_TRUE(ctx().is_prime(p)) << n;
    if (n < 20'000) {
      for (std::uint64_t d = 2; d < p; ++d) ASSERT_NE(n % d, 0u) << n;
    }
  }
}

TEST(Multiplicative, KnownValues) {
  EXPECT_EQ(ctx().mobius(1), 1);
  EXPECT_EQ(ctx().euler_phi(1), 1u);
  EXPECT_EQ(ctx().mobius(4), 0);
  EXPECT_EQ(ctx().mobius(6), 1);
  EXPECT_EQ(ctx().mobius(30), -1);
  for (const auto p : ctx().primes()) ASSERT_EQ(ctx().euler_phi(p), p - 1u);
}

TEST(Multiplicative, AgreeWithNaiveFactorization) {
  for (std::uint64_t n = 1; n <= 10'000; ++n) {
    ASSERT_EQ(ctx().mobius(n), oracle::mobius(n)) << n;
    ASSERT_EQ(ctx().squarefree(n), oracle::squarefree(n)) << n;
    if (n <= 3000) {
      ASSERT_EQ(ctx().euler_phi(n), oracle::phi(n)) << n;
    }
    const auto f = cs::trial_factor(n);
    const auto g = ctx().factor(n);
    ASSERT_EQ(f.count, g.count);
    for (int i = 0; i < f.count; ++i) {
      ASSERT_EQ(f.primes[i], g.primes[i]);
      ASSERT_EQ(f.exponents[i], g.exponents[i]);
    }
  }
}

TEST(Multiplicative, DivisorSumIdentities) {
  for (std::uint64_t n = 1; n <= 10'000; ++n) {
    std::uint64_t phi_sum = 0;
    std::int64_t mu_sum = 0;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
      if (n % d) continue;
      phi_sum += ctx().euler_phi(d);
      mu_sum += ctx().mobius(d);
      if (d * d != n) {
        phi_sum += ctx().euler_phi(n / d);
        mu_sum += ctx().mobius(n / d);
      }
    }
    ASSERT_EQ(phi_sum, n);
    ASSERT_EQ(mu_sum, n == 1 ? 1 : 0);
  }
}

TEST(RamanujanSum, MatchesExponentialSum) {
  for (std::uint64_t q = 1; q <= 50; ++q)
    for (std::uint64_t n = 0; n <= 200; ++n) {
      const auto ref = oracle::ramanujan_sum(q, n);
      const auto c = cs::ramanujan_sum(ctx(), q, n);
      ASSERT_NEAR(static_cast<double>(c), ref.real(), 1e-6) << q << ' ' << n;
      ASSERT_NEAR(0.0, ref.imag(), 1e-6);
      if (ctx().squarefree(q)) {
        const auto f = ctx().factor(q);
        ASSERT_EQ(cs::ramanujan_sum_squarefree(f.distinct(), n), c);
      }
    }
}

TEST(RamanujanSum, SpecialValues) {
  for (std::uint64_t n = 0; n < 100; ++n) EXPECT_EQ(cs::ramanujan_sum(ctx(), 1, n), 1);
  for (std::uint64_t q = 1; q <= 60; ++q)
    for (std::uint64_t k = 0; k < 5; ++k)
      EXPECT_EQ(cs::ramanujan_sum(ctx(), q, k * q), static_cast<std::int64_t>(ctx().euler_phi(q)));
  for (const std::uint64_t p : {101u, 997u, 7919u})
    for (std::uint64_t q = 1; q <= 200; ++q) {
      if (q % p == 0) continue;
      EXPECT_EQ(cs::ramanujan_sum(ctx(), q, p), ctx().mobius(q)) << q;
    }
}

TEST(Primorial, SmallValues) {
  EXPECT_EQ(cs::primorial(ctx(), 3), 2);
  EXPECT_EQ(cs::primorial(ctx(), 8), 210);
  EXPECT_EQ(cs::primorial(ctx(), 2), 1);
  EXPECT_EQ(cs::mertens_product(ctx(), 3), mpq_class(1, 2));
  EXPECT_EQ(cs::mertens_product(ctx(), 8), mpq_class("8/35"));
  EXPECT_NEAR(cs::mertens_product_float(ctx(), 100),
              cs::mertens_product(ctx(), 100).get_d(), 1e-15);
  EXPECT_EQ(cs::primes_below(ctx(), 11), (std::vector<std::uint64_t>{2, 3, 5, 7}));
}

TEST(Farey, OrderTwo) {
  const auto f = cs::farey_points(2);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0], (cs::FareyPoint{0, 1}));
  EXPECT_EQ(f[1], (cs::FareyPoint{1, 2}));
}

TEST(Farey, ReducedAscendingComplete) {
  const std::uint64_t Q = 40;
  const auto f = cs::farey_points(Q);
  std::uint64_t expected = 0;
  for (std::uint64_t q = 1; q <= Q; ++q) expected += oracle::phi(q);
  ASSERT_EQ(f.size(), expected);
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_EQ(std::gcd(f[i].a, f[i].q), 1);
    EXPECT_GE(f[i].a, 0);
    EXPECT_LT(f[i].a, f[i].q);
    if (i > 0) {
      EXPECT_LT(f[i - 1].exact(), f[i].exact());
    }
  }
}

TEST(Farey, SquarefreeCoprime) {
  EXPECT_EQ(cs::squarefree_coprime(ctx(), 10, 6), (std::vector<std::uint64_t>{1, 5, 7}));
  const auto v = cs::squarefree_coprime(ctx(), 500, 10);
  std::vector<std::uint64_t> ref;
  for (std::uint64_t q = 1; q <= 500; ++q)
    if (oracle::squarefree(q) && std::gcd(q, std::uint64_t{10}) == 1) ref.push_back(q);
  EXPECT_EQ(v, ref);
}

TEST(Farey, SquarefreeCountAtLeastHalf) {
  std::uint64_t count = 0;
  for (std::uint64_t q = 1; q <= 100'000; ++q) {
    if (ctx().squarefree(q)) ++count;
    // The count is constant on [q, q + 1), so the right end is the worst case.
    ASSERT_GE(2 * count, q + 1) << q;
  }
}

TEST(Circle, Distances) {
  EXPECT_NEAR(cs::circle_distance(0.05, 0.97), 0.08, 1e-15);
  EXPECT_NEAR(cs::dist_to_int(2.3), 0.3, 1e-15);
  EXPECT_NEAR(cs::dist_to_int(-2.7), 0.3, 1e-15);
  EXPECT_EQ(cs::reduce_mod1(-0.25), 0.75);
}

TEST(WellSpaced, SpecExamples) {
  const std::vector<cs::WeightedPoint> a{{0.0, 2.0}, {0.4, 1.0}};
  EXPECT_EQ(cs::extract_well_spaced(a, 0.3).size(), 2u);
  const std::vector<cs::WeightedPoint> b{{0.0, 2.0}, {0.1, 1.0}};
  const auto kb = cs::extract_well_spaced(b, 0.3);
  ASSERT_EQ(kb.size(), 1u);
  EXPECT_EQ(kb[0].position, 0.0);
  const std::vector<cs::WeightedPoint> c{{0.05, 1.0}, {0.97, 1.0}};
  EXPECT_EQ(cs::extract_well_spaced(c, 0.1).size(), 1u);
  EXPECT_TRUE(cs::extract_well_spaced({}, 0.1).empty());
}

TEST(WellSpaced, FuzzSpacingAndCoverage) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.0, 1.0), wt(0.0, 1.0), del(1e-3, 0.5);
  std::uniform_int_distribution<int> cnt(1, 60);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<cs::WeightedPoint> pts(cnt(rng));
    for (auto& p : pts) p = {pos(rng), wt(rng)};
    const double delta = del(rng);
    const auto kept = cs::extract_well_spaced(pts, delta);
    ASSERT_FALSE(kept.empty());
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (std::size_t j = i + 1; j < kept.size(); ++j)
        ASSERT_GE(cs::circle_distance(kept[i].position, kept[j].position), delta);
    for (const auto& p : pts) {
      bool near = false;
      for (const auto& k : kept) near = near || cs::circle_distance(p.position, k.position) < delta ||
                                       (k.position == p.position && k.weight == p.weight);
      ASSERT_TRUE(near);
    }
    if (kept.size() >= 2) {
      EXPECT_GE(cs::min_circle_gap(kept), delta);
    }
  }
}

TEST(PrimeCount, ExplicitBounds) {
  // x / log x increases, so on [p_k, p_{k+1}) the lower bound is tightest as x
  // approaches p_{k+1} and the upper bound is tightest at p_k.
  const auto primes = ctx().primes();
  for (std::size_t k = 0; k + 1 < primes.size(); ++k) {
    const double p = primes[k], next = primes[k + 1];
    const double count = static_cast<double>(k + 1);
    if (next > 17) {
      ASSERT_GE(count, next / std::log(next)) << p;
    }
    if (p >= 114) {
      ASSERT_LE(count, 1.25 * p / std::log(p)) << p;
    }
  }
}
