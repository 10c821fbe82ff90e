#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "reslab/modular.hpp"
#include "reslab/util.hpp"

namespace reslab {

// A finite set for the Gal-type GCD sum, kept sorted and deduplicated.
// y_m is the largest prime factor across members, with P(1) = 1.
struct GcdSet {
  std::vector<std::uint64_t> members;
  std::uint64_t y_m = 1;

  std::size_t size() const { return members.size(); }
};

inline GcdSet make_gcd_set(std::vector<std::uint64_t> members) {
  if (members.empty())
    throw validation_error("gcd set: must contain at least one element");
  for (std::uint64_t m : members) {
    if (m == 0) throw validation_error("gcd set: members must be positive");
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  GcdSet set;
  set.members = std::move(members);
  for (std::uint64_t m : set.members)
    set.y_m = std::max(set.y_m, largest_prime_factor(m));
  return set;
}

// G(M) = sum over ordered pairs of sqrt((m,n)/[m,n]) = gcd / sqrt(m n).
// Diagonal contributes |M|; the off-diagonal is doubled from the upper
// triangle with a fixed block reduction, so the value is independent of the
// worker count. The ratio is formed as g^2/(m n), never via the lcm.
inline double gcd_sum(const GcdSet& set, unsigned threads = 1) {
  const auto& v = set.members;
  const std::size_t k = v.size();
  const double upper =
      block_sum(k, 64, threads, [&](std::size_t lo, std::size_t hi) {
        KahanSum row;
        for (std::size_t i = lo; i < hi; ++i) {
          const double mi = static_cast<double>(v[i]);
          for (std::size_t j = i + 1; j < k; ++j) {
            const double g = static_cast<double>(std::gcd(v[i], v[j]));
            row.add(g / std::sqrt(mi * static_cast<double>(v[j])));
          }
        }
        return row.value();
      });
  return static_cast<double>(k) + 2.0 * upper;
}

inline double normalized_gcd_sum(const GcdSet& set, unsigned threads = 1) {
  return gcd_sum(set, threads) / static_cast<double>(set.size());
}

// Main-term exponent 2 sqrt(2) sqrt(log K log_3 K / log_2 K), with the o(1)
// set to zero. Needs log_3 K > 0, i.e. K > e^e.
inline double bt_exponent(std::uint64_t k) {
  if (k == 0) throw validation_error("bt_exponent: K must be positive");
  const double l1 = std::log(static_cast<double>(k));
  if (!(l1 > 0.0))
    throw validation_error("bt_exponent: K outside regime (log K <= 0)");
  const double l2 = std::log(l1);
  if (!(l2 > 0.0))
    throw validation_error("bt_exponent: K outside regime (log_2 K <= 0)");
  const double l3 = std::log(l2);
  if (!(l3 > 0.0))
    throw validation_error("bt_exponent: K outside regime (log_3 K <= 0)");
  return 2.0 * std::sqrt(2.0) * std::sqrt(l1 * l3 / l2);
}

struct SearchConfig {
  std::uint64_t pool_smoothness = 13;  // y
  std::uint64_t pool_bound = 30030;    // B
  std::uint64_t iterations = 100;
  std::uint64_t seed = 1;
};

// All squarefree y-smooth integers in [1, B], increasing.
inline std::vector<std::uint64_t> build_smooth_pool(const SearchConfig& cfg,
                                                    const SpfSieve& sieve) {
  if (cfg.pool_smoothness < 2)
    throw validation_error("build_smooth_pool: smoothness must be >= 2");
  if (cfg.pool_bound < 2)
    throw validation_error("build_smooth_pool: bound must be >= 2");
  if (cfg.pool_bound > sieve.limit)
    throw validation_error("build_smooth_pool: bound exceeds the sieve limit");
  const auto primes = primes_upto(sieve, cfg.pool_smoothness);
  std::vector<std::uint64_t> pool;
  auto rec = [&](auto&& self, std::size_t idx, std::uint64_t m) -> void {
    pool.push_back(m);
    for (std::size_t i = idx; i < primes.size(); ++i) {
      if (static_cast<unsigned __int128>(m) * primes[i] > cfg.pool_bound) break;
      self(self, i + 1, m * primes[i]);
    }
  };
  rec(rec, 0, 1);
  std::sort(pool.begin(), pool.end());
  return pool;
}

namespace detail {

inline int omega_squarefree(std::uint64_t n, const SpfSieve& sieve) {
  int w = 0;
  while (n > 1) {
    const std::uint64_t p = sieve.spf[n];
    while (n % p == 0) n /= p;
    ++w;
  }
  return w;
}

inline double pair_weight(std::uint64_t a, std::uint64_t b) {
  const double g = static_cast<double>(std::gcd(a, b));
  return g / std::sqrt(static_cast<double>(a) * static_cast<double>(b));
}

}  // namespace detail

// Hill climb over K-subsets of the smooth pool. The start set takes the K
// pool elements with the most prime factors (ties to the smaller value);
// each accepted swap exchanges one member for one non-member and must
// strictly increase G(M). Proposal order is drawn from the seed, so the
// result is a deterministic function of (seed, pool).
inline GcdSet greedy_search(std::uint64_t k, const SearchConfig& cfg,
                            const SpfSieve& sieve) {
  if (k == 0) throw validation_error("greedy_search: K must be positive");
  const auto pool = build_smooth_pool(cfg, sieve);
  if (pool.size() < k)
    throw validation_error("greedy_search: pool of " +
                           std::to_string(pool.size()) +
                           " is smaller than K = " + std::to_string(k));

  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const int wa = detail::omega_squarefree(pool[a], sieve);
    const int wb = detail::omega_squarefree(pool[b], sieve);
    if (wa != wb) return wa > wb;
    return pool[a] < pool[b];
  });
  std::vector<std::uint64_t> current(k);
  std::vector<std::uint64_t> outside;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (i < k)
      current[i] = pool[order[i]];
    else
      outside.push_back(pool[order[i]]);
  }

  std::mt19937_64 rng(splitmix64(cfg.seed));
  std::uint64_t accepted = 0;
  bool improved = true;
  while (improved && accepted < cfg.iterations) {
    improved = false;
    std::vector<std::pair<std::size_t, std::size_t>> proposals;
    proposals.reserve(current.size() * outside.size());
    for (std::size_t i = 0; i < current.size(); ++i)
      for (std::size_t j = 0; j < outside.size(); ++j)
        proposals.emplace_back(i, j);
    std::shuffle(proposals.begin(), proposals.end(), rng);
    for (const auto& [i, j] : proposals) {
      const std::uint64_t out_m = current[i];
      const std::uint64_t in_m = outside[j];
      // Objective delta of the swap; diagonal terms cancel.
      KahanSum delta;
      for (std::size_t t = 0; t < current.size(); ++t) {
        if (t == i) continue;
        delta.add(detail::pair_weight(in_m, current[t]) -
                  detail::pair_weight(out_m, current[t]));
      }
      if (2.0 * delta.value() > 1e-9) {
        current[i] = in_m;
        outside[j] = out_m;
        ++accepted;
        improved = true;
        if (accepted >= cfg.iterations) break;
      }
    }
  }
  return make_gcd_set(std::move(current));
}

// Tail of the GCD sum over pairs with [m,n]/(m,n) > N^2/2, its relaxation
// with exponent 1/2 - eta, the pointwise Chebyshev factor (2/N^2)^eta that
// links them, and the smooth Euler product reference.
struct TailReport {
  double eta = 0.0;
  double threshold = 0.0;  // N^2 / 2
  double tail = 0.0;
  double relaxed = 0.0;
  double chebyshev_factor = 0.0;  // 2^eta N^{-2 eta}
  double euler_product = 0.0;     // prod_{p <= y_M} (1 + 2/(p^{1/2-eta} - 1))
  bool chebyshev_ok = false;      // tail <= chebyshev_factor * relaxed
};

inline TailReport tail_check(const GcdSet& set, std::uint64_t n_len,
                             double eta) {
  if (!(eta > 0.0 && eta < 0.5))
    throw validation_error("tail_check: eta must lie in (0, 1/2)");
  if (n_len == 0) throw validation_error("tail_check: N must be positive");
  TailReport rep;
  rep.eta = eta;
  const double nd = static_cast<double>(n_len);
  rep.threshold = nd * nd / 2.0;
  const auto& v = set.members;
  KahanSum tail;
  KahanSum relaxed;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      const std::uint64_t g = std::gcd(v[i], v[j]);
      const double a = static_cast<double>(v[i] / g);
      const double b = static_cast<double>(v[j] / g);
      const double inv_ratio = a * b;  // [m,n]/(m,n)
      relaxed.add(std::pow(1.0 / inv_ratio, 0.5 - eta));
      if (inv_ratio > rep.threshold) tail.add(1.0 / std::sqrt(inv_ratio));
    }
  }
  rep.tail = tail.value();
  rep.relaxed = relaxed.value();
  rep.chebyshev_factor = std::pow(2.0 / (nd * nd), eta);
  if (set.y_m > 10'000'000)
    throw compute_error("tail_check: y_M too large for the Euler product");
  double prod = 1.0;
  std::vector<bool> composite(set.y_m + 1, false);
  for (std::uint64_t p = 2; p <= set.y_m; ++p) {
    if (composite[p]) continue;
    prod *= 1.0 + 2.0 / (std::pow(static_cast<double>(p), 0.5 - eta) - 1.0);
    for (std::uint64_t m = p * p; m <= set.y_m; m += p) composite[m] = true;
  }
  rep.euler_product = prod;
  rep.chebyshev_ok = rep.tail <= rep.chebyshev_factor * rep.relaxed * (1.0 + 1e-12);
  return rep;
}

// Set files: one positive integer per line; '#' starts a comment.
inline GcdSet read_set_stream(std::istream& in, const std::string& name) {
  std::vector<std::uint64_t> members;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(b, e - b + 1);
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(tok, &used);
      if (used != tok.size() || v == 0) throw std::invalid_argument(tok);
      members.push_back(v);
    } catch (const std::exception&) {
      throw validation_error(name + ":" + std::to_string(lineno) +
                             ": expected a positive integer, got '" + tok + "'");
    }
  }
  if (members.empty())
    throw validation_error(name + ": no members found");
  return make_gcd_set(std::move(members));
}

inline GcdSet read_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open set file '" + path + "'");
  return read_set_stream(in, path);
}

inline void write_set_file(const std::string& path, const GcdSet& set) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write set file '" + path + "'");
  for (std::uint64_t m : set.members) out << m << "\n";
}

}  // namespace reslab
