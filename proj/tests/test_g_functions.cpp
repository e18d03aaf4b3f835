#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "cuspsieve/g_functions.hpp"
#include "oracles.hpp"

namespace cs = cuspsieve;

namespace {

const cs::PrimeContext& ctx() {
  static const cs::PrimeContext c(200'000);
  return c;
}

constexpr double kC0 = 1.332582275733;

}  // namespace

TEST(GFunction, SmallExactValues) {
  for (const double y : {1.0, 1.5, 1.999}) EXPECT_EQ(cs::g_function(ctx(), 1, y), 1);
  EXPECT_EQ(cs::g_function(ctx(), 1, 3), mpq_class("5/2"));
  EXPECT_EQ(cs::g_function_sifted(ctx(), 1, 10, 3), mpq_class("23/12"));
  for (const double y : {5.0, 17.5, 100.0, 999.0})
    EXPECT_EQ(cs::g_function_sifted(ctx(), 1, y, 2), cs::g_function(ctx(), 1, y));
}

TEST(GFunction, MatchesBruteForceSum) {
  for (const std::uint64_t d : {1u, 2u, 5u, 6u, 35u})
    for (const double z0 : {2.0, 3.0, 5.0, 7.5})
      for (const double y : {1.0, 2.0, 10.0, 57.3, 300.0})
        ASSERT_EQ(cs::g_function_sifted(ctx(), d, y, z0), oracle::g_sifted(d, y, z0))
            << d << ' ' << z0 << ' ' << y;
}

TEST(GFunction, RangeError) {
  EXPECT_THROW(cs::g_function(ctx(), 1, 300'000), std::out_of_range);
}

TEST(GFunction, FloatingAgreesWithExact) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logy(0.0, std::log(1e5));
  for (int i = 0; i < 40; ++i) {
    const double y = std::exp(logy(rng));
    for (const double z0 : {2.0, 3.0, 7.0}) {
      const double exact = cs::g_function_sifted(ctx(), 1, y, z0).get_d();
      const double fl = cs::g_function_sifted_float(ctx(), 1, y, z0);
      ASSERT_NEAR(fl, exact, 1e-12 * exact) << y << ' ' << z0;
      cs::GParams p{y, z0, 1, cs::Mode::floating};
      ASSERT_NEAR(cs::evaluate(ctx(), p), exact, 1e-12 * exact);
    }
  }
}

TEST(GFunction, Monotone) {
  const cs::GTable t1(ctx(), 1, 3, 5000), t6(ctx(), 6, 3, 5000), t1z(ctx(), 1, 7, 5000);
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    ASSERT_GE(t1.at(n), t1.at(n - 1));
    ASSERT_LE(t6.at(n), t1.at(n) + 1e-15);   // 6 is a multiple of 1
    ASSERT_LE(t1z.at(n), t1.at(n) + 1e-15);  // larger z0
  }
  const cs::GTable t30(ctx(), 30, 3, 5000);
  for (std::uint64_t n = 1; n <= 5000; ++n) ASSERT_LE(t30.at(n), t6.at(n) + 1e-15);
}

TEST(GFunction, TableMatchesDirect) {
  const cs::GTable t(ctx(), 5, 3, 20'000);
  for (const double y : {1.0, 2.5, 99.9, 1234.0, 19999.5})
    EXPECT_NEAR(t(y), cs::g_function_sifted_float(ctx(), 5, y, 3), 1e-12 * t(y));
}

TEST(GFunction, AsymptoticPoints) {
  for (const double z : {1e3, 1e4, 1e5}) {
    const double g = cs::g_function_float(ctx(), 1, z);
    EXPECT_LE(std::abs(g - std::log(z) - kC0), 2.44 / std::sqrt(z)) << z;
  }
}

TEST(XiKernel, SpecialValues) {
  for (const double y : {1.0, 7.0}) EXPECT_EQ(cs::xi_kernel(ctx(), 1, y), 1);
  EXPECT_EQ(cs::xi_kernel(ctx(), 1, 0.5), 0);
  for (const std::uint64_t q : {2u, 3u, 6u, 30u, 77u, 210u}) {
    mpq_class ratio(mpz_class(static_cast<unsigned long>(q)),
                    mpz_class(static_cast<unsigned long>(ctx().euler_phi(q))));
    ratio.canonicalize();
    EXPECT_EQ(cs::xi_kernel(ctx(), q, static_cast<double>(q)), ratio) << q;
    EXPECT_EQ(cs::xi_kernel(ctx(), q, 2.0 * static_cast<double>(q)), ratio) << q;
  }
  for (const std::uint64_t p : {5u, 13u, 97u}) EXPECT_EQ(cs::xi_kernel(ctx(), p, p - 0.5), 0);
  EXPECT_THROW(cs::xi_kernel(ctx(), 12, 100), std::domain_error);
}

TEST(XiKernel, MatchesBruteForce) {
  for (std::uint64_t q = 1; q <= 420; ++q) {
    if (!oracle::squarefree(q)) continue;
    for (const double y : {1.0, 2.0, 3.5, 10.0, 30.0, 100.0, 500.0}) {
      ASSERT_EQ(cs::xi_kernel(ctx(), q, y), oracle::xi(q, y)) << q << ' ' << y;
      const auto f = ctx().factor(q);
      ASSERT_EQ(cs::xi_kernel_scaled(f.distinct(), 3, 3.0 * y), oracle::xi(q, y));
      ASSERT_NEAR(cs::xi_kernel_scaled_float(f.distinct(), 3, 3.0 * y), oracle::xi(q, y).get_d(),
                  1e-12);
    }
  }
}

TEST(GBracket, UnitModulusIsSiftedG) {
  for (const std::uint64_t tau : {1u, 7u})
    for (const double z : {10.0, 55.5, 400.0})
      EXPECT_EQ(cs::g_bracket(ctx(), 1, z, 3, tau), cs::g_function_sifted(ctx(), tau, z, 3));
}

TEST(GBracket, PrimeModulus) {
  for (const std::uint64_t p : {5u, 11u, 13u})
    for (const double z : {20.0, 100.0, 777.0}) {
      mpq_class factor(mpz_class(static_cast<unsigned long>(p)),
                       mpz_class(static_cast<unsigned long>(p - 1)));
      const mpq_class rhs = factor * cs::g_function_sifted(ctx(), p, z / static_cast<double>(p), 3);
      EXPECT_EQ(cs::g_bracket(ctx(), p, z, 3, 1), rhs) << p << ' ' << z;
    }
}

TEST(GBracket, MatchesBruteForce) {
  EXPECT_EQ(cs::g_bracket(ctx(), 6, 20, 2, 1), oracle::g_bracket(6, 20, 2, 1));
  for (const std::uint64_t q : {5u, 35u, 77u, 143u, 385u})
    for (const double z : {30.0, 150.0})
      for (const std::uint64_t tau : {1u, 3u}) {
        ASSERT_EQ(cs::g_bracket(ctx(), q, z, 3, tau), oracle::g_bracket(q, z, 3, tau));
        ASSERT_NEAR(cs::g_bracket_float(ctx(), q, z, 3, tau),
                    oracle::g_bracket(q, z, 3, tau).get_d(), 1e-12);
      }
}

TEST(GBracket, Preconditions) {
  EXPECT_THROW(cs::g_bracket(ctx(), 12, 50, 2, 1), std::domain_error);  // not squarefree
  EXPECT_THROW(cs::g_bracket(ctx(), 6, 50, 3, 1), std::domain_error);   // 2 | P(3)
  EXPECT_THROW(cs::g_bracket(ctx(), 5, 50, 3, 5), std::domain_error);   // shares tau
  EXPECT_THROW(cs::g_bracket(ctx(), 5, 0.5, 3, 1), std::domain_error);  // z < 1
}
