#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "reslab/util.hpp"

namespace reslab {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp,
                             std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin; the first twelve primes are a proven witness
// set for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  constexpr std::uint64_t witnesses[] = {2,  3,  5,  7,  11, 13,
                                         17, 19, 23, 29, 31, 37};
  if (n < 2) return false;
  for (std::uint64_t p : witnesses) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : witnesses) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Trial-division factorization with a primality early-out; meant for
// moderate inputs such as q - 1.
inline std::vector<std::pair<std::uint64_t, int>> factorize_trial(
    std::uint64_t n) {
  if (n == 0) throw validation_error("factorize_trial: n must be positive");
  std::vector<std::pair<std::uint64_t, int>> out;
  auto strip = [&](std::uint64_t p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  for (std::uint64_t d = 5; d * d <= n; d += 6) {
    if (n > 1 && is_prime(n)) break;
    strip(d);
    strip(d + 2);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

// Smallest g in [2, q-1] of multiplicative order q-1 mod q.
inline std::uint64_t find_primitive_root(std::uint64_t q) {
  if (q < 3 || !is_prime(q))
    throw validation_error("find_primitive_root: q must be an odd prime");
  const auto fac = factorize_trial(q - 1);
  for (std::uint64_t g = 2; g < q; ++g) {
    bool ok = true;
    for (const auto& [p, e] : fac) {
      if (pow_mod(g, (q - 1) / p, q) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw compute_error("find_primitive_root: no generator found");
}

// Prime modulus with its discrete-log coordinate system: ind[n] is the
// exponent of n with respect to the primitive root g, so g^ind[n] = n (mod q).
struct PrimeModulus {
  std::uint64_t q = 0;
  std::uint64_t phi = 0;
  std::uint64_t g = 0;
  std::vector<std::uint32_t> ind;  // length q; ind[0] is unused

  // n must not be a multiple of q.
  std::uint32_t index_of(std::uint64_t n) const { return ind[n % q]; }
};

inline PrimeModulus build_index_table(std::uint64_t q, std::uint64_t g) {
  if (q < 3 || !is_prime(q))
    throw validation_error("build_index_table: q must be an odd prime");
  if (q > (std::uint64_t{1} << 32))
    throw validation_error("build_index_table: q exceeds the 32-bit table cap");
  if (g < 2 || g >= q)
    throw validation_error("build_index_table: g out of range");
  constexpr std::uint32_t kUnset = 0xffffffffu;
  PrimeModulus mod;
  mod.q = q;
  mod.phi = q - 1;
  mod.g = g;
  mod.ind.assign(q, kUnset);
  std::uint64_t cur = 1;
  for (std::uint64_t e = 0; e < q - 1; ++e) {
    if (mod.ind[cur] != kUnset)
      throw validation_error("build_index_table: g is not a primitive root");
    mod.ind[cur] = static_cast<std::uint32_t>(e);
    cur = mul_mod(cur, g, q);
  }
  return mod;
}

inline PrimeModulus make_prime_modulus(std::uint64_t q) {
  return build_index_table(q, find_primitive_root(q));
}

// Smallest-prime-factor table for n in [2, limit].
struct SpfSieve {
  std::uint64_t limit = 0;
  std::vector<std::uint32_t> spf;  // length limit + 1; entries 0 and 1 unused

  std::uint32_t operator[](std::uint64_t n) const { return spf[n]; }
};

inline constexpr std::uint64_t kDefaultSieveCap = 100'000'000;

inline SpfSieve build_spf_sieve(std::uint64_t limit,
                                std::uint64_t cap = kDefaultSieveCap) {
  if (limit < 2) throw validation_error("build_spf_sieve: limit must be >= 2");
  if (limit > cap)
    throw validation_error("build_spf_sieve: limit " + std::to_string(limit) +
                           " exceeds the cap " + std::to_string(cap));
  SpfSieve s;
  s.limit = limit;
  s.spf.assign(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (s.spf[i] == 0) {
      s.spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      if (p > s.spf[i] || i * p > limit) break;
      s.spf[i * p] = p;
    }
  }
  return s;
}

inline std::vector<std::pair<std::uint64_t, int>> factorize(
    std::uint64_t n, const SpfSieve& sieve) {
  if (n == 0) throw validation_error("factorize: n must be positive");
  if (n > sieve.limit)
    throw validation_error("factorize: n exceeds the sieve limit");
  std::vector<std::pair<std::uint64_t, int>> out;
  while (n > 1) {
    const std::uint64_t p = sieve.spf[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

inline std::vector<std::uint64_t> primes_upto(const SpfSieve& sieve,
                                              std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  const std::uint64_t hi = std::min(bound, sieve.limit);
  for (std::uint64_t n = 2; n <= hi; ++n) {
    if (sieve.spf[n] == n) out.push_back(n);
  }
  return out;
}

// Largest prime factor, with P(1) = 1. Trial division; adequate for the
// desk-scale set members this library handles.
inline std::uint64_t largest_prime_factor(std::uint64_t m) {
  if (m == 0)
    throw validation_error("largest_prime_factor: m must be positive");
  std::uint64_t best = 1;
  for (const auto& [p, e] : factorize_trial(m)) best = std::max(best, p);
  return m == 1 ? 1 : best;
}

}  // namespace reslab
