#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cuspsieve/exp_sums.hpp"

namespace cuspsieve {

namespace {

constexpr long double kPiL = std::numbers::pi_v<long double>;
constexpr long double kSqrt2L = std::numbers::sqrt2_v<long double>;

// sum_{m=1}^{K} e(m phi), phi in [0, 1).
cplx geometric(std::uint64_t K, long double phi) {
  if (K == 0) return 0.0;
  if (phi == 0.0L) return static_cast<double>(K);
  const long double ratio = std::sin(kPiL * static_cast<long double>(K) * phi) /
                            std::sin(kPiL * phi);
  const long double t = kPiL * static_cast<long double>(K + 1) * phi;
  return {static_cast<double>(ratio * std::cos(t)), static_cast<double>(ratio * std::sin(t))};
}

template <class Visit>
void for_each_squarefree_divisor(std::span<const std::uint64_t> primes, std::size_t i,
                                 std::uint64_t d, int mu, std::uint64_t cap, Visit&& visit) {
  visit(d, mu);
  for (std::size_t j = i; j < primes.size(); ++j) {
    if (d > cap / primes[j]) continue;
    for_each_squarefree_divisor(primes, j + 1, d * primes[j], -mu, cap, visit);
  }
}

double model_scale(const PrimeContext& ctx, std::uint64_t N, double z0) {
  return 1.0 / (mertens_product_float(ctx, z0) * std::log(static_cast<double>(N)));
}

}  // namespace

cplx sifted_exp_sum(std::uint64_t M, std::span<const std::uint64_t> sift_primes,
                    long double theta) {
  const long double t = reduce_mod1(theta);
  cplx s = 0.0;
  for_each_squarefree_divisor(sift_primes, 0, 1, 1, M, [&](std::uint64_t d, int mu) {
    const long double phi = reduce_mod1(static_cast<long double>(d) * t);
    s += static_cast<double>(mu) * geometric(M / d, phi);
  });
  return s;
}

std::uint64_t sifted_count(std::uint64_t M, std::span<const std::uint64_t> sift_primes) {
  std::int64_t c = 0;
  for_each_squarefree_divisor(sift_primes, 0, 1, 1, M, [&](std::uint64_t d, int mu) {
    c += mu * static_cast<std::int64_t>(M / d);
  });
  return static_cast<std::uint64_t>(c);
}

cplx local_model_full(const PrimeContext& ctx, std::uint64_t N, double z0, double alpha) {
  if (!(z0 >= 2.0)) throw std::domain_error("local model: z0 must be >= 2");
  const auto sift = primes_below(ctx, z0);
  return model_scale(ctx, N, z0) * sifted_exp_sum(N, sift, static_cast<long double>(alpha));
}

cplx local_model_sqrt2(const PrimeContext& ctx, std::uint64_t N, double z0, int H,
                       double alpha) {
  if (!(z0 >= 2.0)) throw std::domain_error("local model: z0 must be >= 2");
  if (H < 0) throw std::domain_error("local model: H must be >= 0");
  const auto sift = primes_below(ctx, z0);
  const long double a = alpha;
  cplx s = 0.5 * sifted_exp_sum(N, sift, a);
  // Fourier coefficient of the indicator of [0, 1/2] at odd h is 1 / (i pi h).
  for (int h = -H; h <= H; ++h) {
    if (h % 2 == 0) continue;
    const long double theta = reduce_mod1(static_cast<long double>(h) * kSqrt2L + a);
    const cplx c(0.0, -1.0 / (std::numbers::pi * h));
    s += c * sifted_exp_sum(N, sift, theta);
  }
  return model_scale(ctx, N, z0) * s;
}

IntervalPolynomial::IntervalPolynomial(double lo, double len, int H)
    : lo_(reduce_mod1(lo)), len_(len), H_(H), coeffs_(2 * static_cast<std::size_t>(H) + 1) {
  coeffs_[static_cast<std::size_t>(H)] = len;
  for (int h = 1; h <= H; ++h) {
    const long double hl = h;
    const long double p1 = reduce_mod1(-hl * lo_);
    const long double p2 = reduce_mod1(-hl * (static_cast<long double>(lo_) + len));
    const cplx e1(std::cos(2 * kPiL * p1), std::sin(2 * kPiL * p1));
    const cplx e2(std::cos(2 * kPiL * p2), std::sin(2 * kPiL * p2));
    const double fejer = 1.0 - static_cast<double>(h) / static_cast<double>(H + 1);
    const cplx a = (e1 - e2) / cplx(0.0, 2.0 * std::numbers::pi * h) * fejer;
    coeffs_[static_cast<std::size_t>(H + h)] = a;
    coeffs_[static_cast<std::size_t>(H - h)] = std::conj(a);
  }
}

double IntervalPolynomial::eval(double x) const {
  double s = std::real(coeffs_[static_cast<std::size_t>(H_)]);
  for (int h = 1; h <= H_; ++h) {
    const long double ph = reduce_mod1(static_cast<long double>(h) * x);
    const cplx e(std::cos(2 * kPiL * ph), std::sin(2 * kPiL * ph));
    s += 2.0 * std::real(coeffs_[static_cast<std::size_t>(H_ + h)] * e);
  }
  return s;
}

bool IntervalPolynomial::contains(double x) const {
  if (len_ >= 1.0) return true;
  return reduce_mod1(x - lo_) <= len_;
}

double IntervalPolynomial::error_envelope(double x) const {
  const double d = std::min(circle_distance(x, lo_), circle_distance(x, lo_ + len_));
  if (d <= 0.0) return 1.0;
  // Fejer tail: int_{|t| >= d} F_H <= 2 cot(pi d) / (pi (H + 1)).
  const double tail =
      2.0 / (std::numbers::pi * (H_ + 1) * std::tan(std::numbers::pi * d));
  return std::min(1.0, tail);
}

IntervalPolynomial vaaler_coeffs(double lo, double len, int H) {
  if (H < 1) throw std::domain_error("interval polynomial: H must be >= 1");
  if (!(len >= 0.0 && len <= 1.0))
    throw std::domain_error("interval polynomial: length must lie in [0, 1]");
  return IntervalPolynomial(lo, len, H);
}

}  // namespace cuspsieve
