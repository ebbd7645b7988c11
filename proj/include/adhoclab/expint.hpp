#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace adhoclab {

namespace detail {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/* E1 by the ascending series  -gamma - ln x + sum (-1)^{k+1} x^k / (k k!).
 * The series alternates, so cancellation limits it to small arguments; it is
 * used below the CF crossover where every term is O(x). */
inline double e1_series(double x) {
  double sum = 0.0, term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -x / k;
    const double add = -term / k;
    sum += add;
    if (std::fabs(add) < std::numeric_limits<double>::epsilon() * std::fabs(sum)) break;
  }
  return sum - kEulerGamma - std::log(x);
}

/* E1 by the modified Lentz continued fraction
 *   E1(x) = e^{-x} / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...)))
 * Reliable for x >= 1. */
inline double e1_continued_fraction(double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < std::numeric_limits<double>::epsilon()) break;
  }
  return h * std::exp(-x);
}

/* Ei ascending series for x > 0: gamma + ln x + sum x^k/(k k!).
 * All terms positive, stable through x = 40. */
inline double ei_series_positive(double x) {
  double sum = 0.0, term = 1.0;
  for (int k = 1; k < 400; ++k) {
    term *= x / k;
    const double add = term / k;
    sum += add;
    if (add < std::numeric_limits<double>::epsilon() * sum) break;
  }
  return kEulerGamma + std::log(x) + sum;
}

/* Ei asymptotic series for large positive x: (e^x/x) sum k!/x^k, truncated at
 * the smallest term. At the x > 40 crossover the optimally truncated error
 * is far below double precision. */
inline double ei_asymptotic_positive(double x) {
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 400; ++k) {
    const double next = term * k / x;
    if (next >= term) break;  // series started diverging
    term = next;
    sum += term;
    if (term < std::numeric_limits<double>::epsilon() * sum) break;
  }
  return std::exp(x) / x * sum;
}

}  // namespace detail

/* First exponential integral E1(x) = int_x^inf e^-t/t dt for x > 0.
 * Series below 1, continued fraction beyond; underflows to 0 past the point
 * where e^-x is subnormal. */
inline double exp_integral_e1(double x) {
  if (!(x > 0.0)) throw std::domain_error("exp_integral_e1: requires x > 0");
  if (x > 745.0) return 0.0;
  return x < 1.0 ? detail::e1_series(x) : detail::e1_continued_fraction(x);
}

/* Cauchy principal value exponential integral Ei(x), x != 0.
 * Ei(-x) = -E1(x) for x > 0. Positive branch: ascending series to 40,
 * asymptotic expansion beyond; overflows to +inf past ~709. */
inline double exp_integral_ei(double x) {
  if (x == 0.0) throw std::domain_error("exp_integral_ei: logarithmic singularity at 0");
  if (x < 0.0) return -exp_integral_e1(-x);
  if (x <= 40.0) return detail::ei_series_positive(x);
  return detail::ei_asymptotic_positive(x);
}

}  // namespace adhoclab
