#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reslab/charsum.hpp"
#include "reslab/expint.hpp"
#include "reslab/modular.hpp"
#include "reslab/util.hpp"

namespace reslab {

inline constexpr double kExpE = 15.154262241479262;  // e^e

// lambda = sqrt(log Y * log log Y). Y below e^e is rejected as degenerate;
// equality is accepted (lambda(e^e) = sqrt(e)).
inline double lambda_of(double Y) {
  if (!(Y >= kExpE))
    throw validation_error("lambda_of: Y below e^e is degenerate");
  const double l1 = std::log(Y);
  return std::sqrt(l1 * std::log(l1));
}

namespace detail {

// Coefficient at a window prime: r(p) = lambda / (sqrt(p) log p).
inline double hough_prime_coeff(double lambda, std::uint64_t p) {
  const double pd = static_cast<double>(p);
  return lambda / (std::sqrt(pd) * std::log(pd));
}

// Prime window [lambda, exp((log lambda)^2)].
inline std::pair<double, double> hough_window(double lambda) {
  const double l = std::log(lambda);
  return {lambda, std::exp(l * l)};
}

}  // namespace detail

// The squarefree-supported resonator r: coefficients multiply
// lambda / (sqrt(p) log p) over the window primes dividing m, with support
// restricted to m <= Y = q/N. Support and coefficients are fully enumerated.
struct HoughResonator {
  std::uint64_t q = 0;
  std::uint64_t N = 0;
  double Y = 0.0;  // q / N
  double lambda = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;
  bool window_overridden = false;
  bool lambda_in_regime = true;  // false when Y < e^e
  std::vector<std::uint64_t> support;  // sorted ascending; support[0] == 1
  std::vector<double> coeff;           // r(support[i]); coeff[0] == 1

  double sum_r() const {
    KahanSum s;
    for (double r : coeff) s.add(r);
    return s.value();
  }
  double sum_r2() const {
    KahanSum s;
    for (double r : coeff) s.add(r * r);
    return s.value();
  }
};

// Enumerates all squarefree products of window primes that stay <= Y,
// depth-first. The boundary test m <= Y is done as m * N <= q in integers.
// A window with no usable primes yields the trivial resonator {1}.
inline HoughResonator build_resonator(
    std::uint64_t q, std::uint64_t N,
    std::optional<std::pair<double, double>> window_override,
    std::size_t support_cap) {
  if (!is_prime(q) || q < 3)
    throw validation_error("build_resonator: q must be an odd prime");
  if (N == 0 || N >= q)
    throw validation_error("build_resonator: need 1 <= N < q");
  if (support_cap == 0)
    throw validation_error("build_resonator: support_cap must be positive");

  HoughResonator res;
  res.q = q;
  res.N = N;
  res.Y = static_cast<double>(q) / static_cast<double>(N);
  if (res.Y >= kExpE) {
    res.lambda = lambda_of(res.Y);
  } else if (res.Y > std::exp(1.0)) {
    // Same formula on the rest of its real domain; flagged as out of regime.
    res.lambda = std::sqrt(std::log(res.Y) * std::log(std::log(res.Y)));
    res.lambda_in_regime = false;
  } else {
    res.lambda = 1.0;
    res.lambda_in_regime = false;
  }
  if (window_override) {
    res.p_min = window_override->first;
    res.p_max = window_override->second;
    res.window_overridden = true;
  } else {
    const auto w = detail::hough_window(res.lambda);
    res.p_min = w.first;
    res.p_max = w.second;
  }

  const double hi_d = std::min(res.p_max, res.Y);
  std::vector<std::uint64_t> primes;
  if (hi_d >= 2.0) {
    if (hi_d > 1e8)
      throw compute_error("build_resonator: window too large to enumerate");
    const std::uint64_t lo =
        std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(res.p_min)));
    const std::uint64_t hi = static_cast<std::uint64_t>(std::floor(hi_d));
    for (std::uint64_t p = lo; p <= hi; ++p) {
      if (is_prime(p)) primes.push_back(p);
    }
  }

  std::vector<std::pair<std::uint64_t, double>> items;
  auto fits = [&](std::uint64_t m, std::uint64_t p) {
    // m * p <= Y  <=>  m * p * N <= q
    return static_cast<unsigned __int128>(m) * p * N <= q;
  };
  auto rec = [&](auto&& self, std::size_t idx, std::uint64_t m, double r) -> void {
    if (items.size() >= support_cap)
      throw compute_error(
          "build_resonator: support exceeds the cap of " +
          std::to_string(support_cap) +
          " (raise the cap or shrink the window)");
    items.emplace_back(m, r);
    for (std::size_t i = idx; i < primes.size(); ++i) {
      const std::uint64_t p = primes[i];
      if (!fits(m, p)) break;
      self(self, i + 1, m * p, r * detail::hough_prime_coeff(res.lambda, p));
    }
  };
  rec(rec, 0, 1, 1.0);

  std::sort(items.begin(), items.end());
  res.support.reserve(items.size());
  res.coeff.reserve(items.size());
  for (const auto& [m, r] : items) {
    res.support.push_back(m);
    res.coeff.push_back(r);
  }
  return res;
}

// Orthogonality upper bound for the first moment: phi(q) * sum r(m)^2.
inline double m1_upper(const PrimeModulus& mod, const HoughResonator& res) {
  return static_cast<double>(mod.phi) * res.sum_r2();
}

struct M2MainLower {
  double full = 0.0;   // sum_{k <= N} r(k) * sum_{m <= Y/k} r(m)^2
  double ratio = 0.0;  // sum_{k <= N} r(k)
};

// The second-moment main term, evaluated exactly over the enumerated
// support. Inner truncation m <= Y/k is the integer test m * k * N <= q
// against the resonator's own (q, N).
inline M2MainLower m2_main_lower(const HoughResonator& res, std::uint64_t N) {
  M2MainLower out;
  const std::size_t n = res.support.size();
  std::vector<double> prefix_r2(n);
  {
    KahanSum s;
    for (std::size_t i = 0; i < n; ++i) {
      s.add(res.coeff[i] * res.coeff[i]);
      prefix_r2[i] = s.value();
    }
  }
  KahanSum full;
  KahanSum ratio;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t k = res.support[i];
    if (k > N) continue;
    // largest m with m * k * res.N <= res.q
    const std::uint64_t bound =
        res.q / (k * res.N);  // k <= Y <= q and N < q keep this in range
    const auto it = std::upper_bound(res.support.begin(), res.support.end(), bound);
    const std::size_t count = static_cast<std::size_t>(it - res.support.begin());
    ratio.add(res.coeff[i]);
    if (count > 0) full.add(res.coeff[i] * prefix_r2[count - 1]);
  }
  out.full = full.value();
  out.ratio = ratio.value();
  return out;
}

struct HoughMoments {
  double m1 = 0.0;                   // sum_{chi != chi0} |R_chi|^2
  std::complex<double> m2;           // sum_{chi != chi0} S_chi(N) |R_chi|^2
  std::complex<double> s0;           // S_{chi0}(N)
  std::complex<double> r0;           // R_{chi0}
};

// Exact moments via two batch transforms: one for S_chi over n <= N, one
// for R_chi over the resonator support.
inline HoughMoments exact_moments(const CharGroup& group,
                                  const SumParams& params,
                                  const HoughResonator& res,
                                  const SpfSieve& sieve, const Dft& plan,
                                  unsigned threads = 1) {
  check_sum_params(group, params);
  if (plan.length() != group.order())
    throw validation_error("exact_moments: plan length does not match q - 1");
  const PrimeModulus& mod = group.modulus();
  const auto svals = sum_all(group, params, sieve, plan);
  std::vector<std::complex<double>> buckets(group.order());
  for (std::size_t i = 0; i < res.support.size(); ++i) {
    const std::uint64_t m = res.support[i];
    if (m % mod.q == 0) continue;  // chi vanishes there
    buckets[mod.ind[m % mod.q]] += res.coeff[i] * f_eval(params.f, m, sieve);
  }
  const auto rvals = plan(buckets);

  HoughMoments out;
  out.s0 = svals[0];
  out.r0 = rvals[0];
  const std::size_t order = group.order();
  out.m1 = block_sum(order - 1, 4096, threads, [&](std::size_t lo, std::size_t hi) {
    KahanSum s;
    for (std::size_t t = lo; t < hi; ++t) s.add(std::norm(rvals[t + 1]));
    return s.value();
  });
  out.m2 = block_sum_complex(order - 1, 4096, threads,
                             [&](std::size_t lo, std::size_t hi) {
                               KahanComplex s;
                               for (std::size_t t = lo; t < hi; ++t)
                                 s.add(svals[t + 1] * std::norm(rvals[t + 1]));
                               return s.value();
                             });
  return out;
}

struct Thm11Prediction {
  double value = 0.0;
  double A = 0.0;
  double tau = 0.0;
  double tau_prime = 0.0;
  std::vector<std::string> flags;
};

// Main term sqrt(N) exp(A (tau + tau') sqrt(log q / log_2 q)) with the o(1)
// set to zero; tau = log N / sqrt(log q log_2 q).
inline Thm11Prediction predicted_bound_thm11(std::uint64_t q, std::uint64_t N) {
  if (q < 3) throw validation_error("predicted_bound_thm11: q too small");
  const double logq = std::log(static_cast<double>(q));
  const double log2q = std::log(logq);
  if (!(log2q > 0.0))
    throw validation_error("predicted_bound_thm11: log log q must be positive");
  if (N == 0) throw validation_error("predicted_bound_thm11: N must be positive");

  Thm11Prediction out;
  if (N == 1) {
    // tau -> 0 forces A -> infinity and A (tau + tau') -> 0.
    out.value = 1.0;
    out.tau = 0.0;
    out.flags.push_back("N=1 is outside the theorem regime; reporting the tau->0 limit");
    return out;
  }
  const double tau =
      std::log(static_cast<double>(N)) / std::sqrt(logq * log2q);
  const HoughParams hp = solve_A(tau);
  out.A = hp.A;
  out.tau = tau;
  out.tau_prime = hp.tau_prime;
  out.value = std::sqrt(static_cast<double>(N)) *
              std::exp(hp.A * (tau + hp.tau_prime) * std::sqrt(logq / log2q));
  const double cube = log2q * log2q * log2q;
  if (tau < 1.0 / log2q || tau > cube) {
    out.flags.push_back("tau outside stated regime [1/log2 q, (log2 q)^3]");
  }
  return out;
}

}  // namespace reslab
