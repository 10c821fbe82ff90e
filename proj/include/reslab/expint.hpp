#pragma once

#include <cmath>
#include <limits>

#include "reslab/util.hpp"

namespace reslab {
namespace detail {

// Power series around 0, good for 0 < x <= 1:
//   E1(x) = -gamma - log x + sum_{k>=1} (-1)^{k+1} x^k / (k * k!).
inline double e1_series(double x) {
  long double sum = 0.0L;
  long double term = 1.0L;  // x^k / k! carried incrementally
  for (int k = 1; k <= 64; ++k) {
    term *= -static_cast<long double>(x) / k;
    const long double delta = -term / k;
    sum += delta;
    if (std::fabs(static_cast<double>(delta)) <
        1e-18 * (std::fabs(static_cast<double>(sum)) + 1e-30))
      break;
  }
  return static_cast<double>(-kEulerGamma - std::log(static_cast<long double>(x)) +
                             sum);
}

// Modified Lentz continued fraction, good for x >= 1:
//   E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - 9/(...)))).
inline double e1_contfrac(double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 200000; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = a * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

}  // namespace detail

// E1(x) = integral_x^infinity e^{-u}/u du, to about 1e-13 relative.
inline double exp_integral_e1(double x) {
  if (!(x > 0.0)) throw validation_error("exp_integral_e1: requires x > 0");
  return x <= 1.0 ? detail::e1_series(x) : detail::e1_contfrac(x);
}

// Resonance parameter system: given tau > 0, the A with E1(A) = tau, together
// with tau' = integral_A^infinity e^{-u}/u^2 du = e^{-A}/A - tau (integration
// by parts).
struct HoughParams {
  double A = 0.0;
  double tau = 0.0;
  double tau_prime = 0.0;
};

inline HoughParams solve_A(double tau) {
  if (!(tau > 0.0)) throw validation_error("solve_A: tau must be positive");
  // E1 decreases from +infinity at 0+ to 0; bracket by doubling/halving.
  double lo = 1.0;
  double hi = 1.0;
  const double e1_at_1 = exp_integral_e1(1.0);
  if (e1_at_1 >= tau) {
    while (exp_integral_e1(hi) > tau) {
      hi *= 2.0;
      if (hi > 1e6) break;  // E1 underflows to 0 long before this
    }
  } else {
    while (exp_integral_e1(lo) < tau) {
      lo *= 0.5;
      if (lo < 1e-300)
        throw compute_error("solve_A: tau too large, A underflows");
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (exp_integral_e1(mid) >= tau)
      lo = mid;
    else
      hi = mid;
  }
  HoughParams out;
  out.A = 0.5 * (lo + hi);
  out.tau = tau;
  out.tau_prime = std::exp(-out.A) / out.A - tau;
  return out;
}

}  // namespace reslab
