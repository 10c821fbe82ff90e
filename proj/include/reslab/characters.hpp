#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "reslab/modular.hpp"
#include "reslab/util.hpp"

namespace reslab {

// The full character group mod a prime q. Characters are indexed by
// j in [0, q-2] against the fixed primitive root g of the modulus:
//
//   chi_j(n) = e(j * ind(n) / (q-1)),   e(x) = exp(2 pi i x),
//
// with chi_0 the principal character. Roots of unity are tabulated once
// from the angle formula rather than by repeated multiplication.
class CharGroup {
 public:
  explicit CharGroup(PrimeModulus mod) : mod_(std::move(mod)) {
    const std::uint64_t order = mod_.phi;
    roots_.resize(order);
    for (std::uint64_t a = 0; a < order; ++a) {
      roots_[a] = std::polar(
          1.0, 2.0 * kPi * static_cast<double>(a) / static_cast<double>(order));
    }
  }

  const PrimeModulus& modulus() const { return mod_; }
  std::uint64_t q() const { return mod_.q; }
  std::uint64_t order() const { return mod_.phi; }

  std::complex<double> root(std::uint64_t a) const {
    return roots_[a % mod_.phi];
  }

  // chi_j(n); zero on multiples of q.
  std::complex<double> chi(std::uint64_t j, std::uint64_t n) const {
    const std::uint64_t r = n % mod_.q;
    if (r == 0) return {};
    return roots_[mul_mod(j % mod_.phi, mod_.ind[r], mod_.phi)];
  }

  // sum over all characters chi (principal included) of chi(m) * conj(chi(n));
  // phi(q) when q divides m - n, zero otherwise.
  std::complex<double> orthogonality_sum(std::uint64_t m,
                                         std::uint64_t n) const {
    if (m % mod_.q == 0 || n % mod_.q == 0)
      throw validation_error(
          "orthogonality_sum: arguments must be coprime to q");
    const std::uint64_t order = mod_.phi;
    const std::uint64_t am = mod_.ind[m % mod_.q];
    const std::uint64_t an = mod_.ind[n % mod_.q];
    KahanComplex acc;
    std::uint64_t im = 0;
    std::uint64_t in = 0;
    for (std::uint64_t j = 0; j < order; ++j) {
      acc.add(roots_[im] * std::conj(roots_[in]));
      im += am;
      if (im >= order) im -= order;
      in += an;
      if (in >= order) in -= order;
    }
    return acc.value();
  }

 private:
  PrimeModulus mod_;
  std::vector<std::complex<double>> roots_;
};

inline std::complex<double> chi_eval(const CharGroup& group, std::uint64_t j,
                                     std::uint64_t n) {
  return group.chi(j, n);
}

// Index of the conjugate character.
inline std::uint64_t conjugate_index(const CharGroup& group, std::uint64_t j) {
  const std::uint64_t order = group.order();
  return (order - j % order) % order;
}

}  // namespace reslab
