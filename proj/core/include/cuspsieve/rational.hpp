#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>

namespace cuspsieve {

/// Exact sum of many fractions with small denominators.
///
/// Keeps a running common denominator D and an integer numerator S, so each
/// term costs one gcd with a machine word and one exact division instead of a
/// full rational canonicalisation. Summing 1/phi(l) for l <= 10^5 stays in the
/// millisecond range even though D grows to ~10^5 bits.
class RationalAccumulator {
 public:
  void add(long num, unsigned long den) {
    if (num == 0) return;
    scale_to(den);
    mpz_class share = den_;
    mpz_divexact_ui(share.get_mpz_t(), share.get_mpz_t(), den);
    if (num > 0)
      mpz_addmul_ui(num_.get_mpz_t(), share.get_mpz_t(), static_cast<unsigned long>(num));
    else
      mpz_submul_ui(num_.get_mpz_t(), share.get_mpz_t(), static_cast<unsigned long>(-num));
  }

  void add(const mpq_class& x) {
    if (x == 0) return;
    if (x.get_den().fits_ulong_p() && x.get_num().fits_slong_p()) {
      add(x.get_num().get_si(), x.get_den().get_ui());
      return;
    }
    const mpz_class g = gcd(den_, x.get_den());
    const mpz_class extra = x.get_den() / g;
    num_ *= extra;
    den_ *= extra;
    num_ += x.get_num() * (den_ / x.get_den());
  }

  mpq_class value() const {
    mpq_class v(num_, den_);
    v.canonicalize();
    return v;
  }

 private:
  void scale_to(unsigned long den) {
    const unsigned long g = mpz_gcd_ui(nullptr, den_.get_mpz_t(), den);
    const unsigned long extra = den / g;
    if (extra != 1) {
      num_ *= extra;
      den_ *= extra;
    }
  }

  mpz_class num_ = 0;
  mpz_class den_ = 1;
};

/// Neumaier-compensated floating sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace cuspsieve
