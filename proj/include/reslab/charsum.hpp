#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "reslab/characters.hpp"
#include "reslab/dft.hpp"
#include "reslab/multfn.hpp"
#include "reslab/util.hpp"

namespace reslab {

// Parameters of the twisted sum S_chi(N) = sum_{n <= N} f(n) chi(n).
// N < q keeps the residues of 1..N distinct and nonzero.
struct SumParams {
  std::uint64_t N = 0;
  MultFnSpec f;
};

inline void check_sum_params(const CharGroup& group, const SumParams& params) {
  if (params.N == 0)
    throw validation_error("sum: N must be positive");
  if (params.N >= group.q())
    throw validation_error("sum: N must be smaller than q");
}

// Reference path: direct accumulation in increasing n with compensated
// summation. The character value is evaluated from the angle formula per
// term rather than from the group's root table, so this path stays an
// independent oracle for the batch transform.
inline std::complex<double> sum_single(const CharGroup& group,
                                       const SumParams& params,
                                       const SpfSieve& sieve, std::uint64_t j) {
  check_sum_params(group, params);
  const std::uint64_t order = group.order();
  const std::uint64_t jr = j % order;
  const PrimeModulus& mod = group.modulus();
  KahanComplex acc;
  for (std::uint64_t n = 1; n <= params.N; ++n) {
    const std::uint64_t a = mod.ind[n];
    const double chi_angle = 2.0 * kPi *
                             static_cast<double>(mul_mod(jr, a, order)) /
                             static_cast<double>(order);
    acc.add(std::polar(1.0, chi_angle + f_angle(params.f, n, sieve)));
  }
  return acc.value();
}

// Batch path: bucket f(n) by discrete log and apply one length-(q-1)
// transform. values[j] = S_{chi_j}(N) for every j in [0, q-2].
inline std::vector<std::complex<double>> sum_all(const CharGroup& group,
                                                 const SumParams& params,
                                                 const SpfSieve& sieve,
                                                 const Dft& plan) {
  check_sum_params(group, params);
  if (plan.length() != group.order())
    throw validation_error("sum_all: plan length does not match q - 1");
  const PrimeModulus& mod = group.modulus();
  std::vector<std::complex<double>> buckets(group.order());
  for (std::uint64_t n = 1; n <= params.N; ++n) {
    buckets[mod.ind[n]] += f_eval(params.f, n, sieve);
  }
  return plan(buckets);
}

inline std::vector<std::complex<double>> sum_all(const CharGroup& group,
                                                 const SumParams& params,
                                                 const SpfSieve& sieve) {
  return sum_all(group, params, sieve, Dft(group.order()));
}

struct MaxChar {
  std::uint64_t j = 0;
  double magnitude = 0.0;
};

inline MaxChar max_from_values(
    const std::vector<std::complex<double>>& values) {
  MaxChar best;
  for (std::uint64_t j = 1; j < values.size(); ++j) {
    const double mag = std::abs(values[j]);
    if (best.j == 0 || mag > best.magnitude) {
      best.j = j;
      best.magnitude = mag;
    }
  }
  return best;
}

// Maximizing non-principal index and |S_chi(N)|; ties go to the smallest j.
inline MaxChar max_nonprincipal(const CharGroup& group, const SumParams& params,
                                const SpfSieve& sieve, const Dft& plan) {
  if (group.q() < 5)
    throw validation_error("max_nonprincipal: q must be at least 5");
  return max_from_values(sum_all(group, params, sieve, plan));
}

inline MaxChar max_nonprincipal(const CharGroup& group, const SumParams& params,
                                const SpfSieve& sieve) {
  return max_nonprincipal(group, params, sieve, Dft(group.order()));
}

// Polya-Vinogradov envelope sqrt(q) log q.
inline double pv_bound(std::uint64_t q) {
  if (q < 3) throw validation_error("pv_bound: q must be at least 3");
  const double qd = static_cast<double>(q);
  return std::sqrt(qd) * std::log(qd);
}

// Burgess envelope N^{1-1/r} q^{(r+1)/(4 r^2)} log q.
inline double burgess_bound(std::uint64_t q, std::uint64_t N, unsigned r) {
  if (r == 0) throw validation_error("burgess_bound: r must be at least 1");
  if (q < 3) throw validation_error("burgess_bound: q must be at least 3");
  const double qd = static_cast<double>(q);
  const double nd = static_cast<double>(N);
  const double rd = static_cast<double>(r);
  return std::pow(nd, 1.0 - 1.0 / rd) *
         std::pow(qd, (rd + 1.0) / (4.0 * rd * rd)) * std::log(qd);
}

}  // namespace reslab
