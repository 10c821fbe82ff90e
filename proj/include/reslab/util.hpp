#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

namespace reslab {

// Bad input: a documented precondition was violated (CLI exit code 2).
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Computation cannot proceed: degenerate instance or a resource cap was hit
// (CLI exit code 3).
struct compute_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEulerGamma = 0.5772156649015328606065120900824024310;

// Kahan compensated accumulator; the caller fixes the summation order.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

class KahanComplex {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_;
  KahanSum im_;
};

// SplitMix64, the mixing function behind every seeded stream in the library.
// Streams are documented as: value(seed, key) = splitmix64(splitmix64(seed) ^ key).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_pair(std::uint64_t seed, std::uint64_t key) {
  return splitmix64(splitmix64(seed) ^ key);
}

// Top 53 bits -> [0, 1).
inline double unit_double(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

namespace detail {

template <class Fn>
void run_blocks(std::size_t nblocks, unsigned threads, Fn&& run) {
  if (threads <= 1 || nblocks <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b) run(b);
    return;
  }
  const unsigned nw =
      static_cast<unsigned>(std::min<std::size_t>(threads, nblocks));
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (unsigned w = 0; w < nw; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t b = w; b < nblocks; b += nw) run(b);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

// Deterministic block-parallel sum: [0, count) is cut into fixed blocks of
// `block` items, per-block sums are computed (possibly on several threads)
// and reduced in block order, so the result does not depend on the worker
// count. `fn(lo, hi)` returns the partial sum over [lo, hi).
template <class Fn>
double block_sum(std::size_t count, std::size_t block, unsigned threads, Fn&& fn) {
  if (count == 0) return 0.0;
  if (block == 0) block = 1;
  const std::size_t nblocks = (count + block - 1) / block;
  std::vector<double> partial(nblocks);
  detail::run_blocks(nblocks, threads, [&](std::size_t b) {
    const std::size_t lo = b * block;
    const std::size_t hi = std::min(count, lo + block);
    partial[b] = fn(lo, hi);
  });
  KahanSum acc;
  for (double v : partial) acc.add(v);
  return acc.value();
}

template <class Fn>
std::complex<double> block_sum_complex(std::size_t count, std::size_t block,
                                       unsigned threads, Fn&& fn) {
  if (count == 0) return {};
  if (block == 0) block = 1;
  const std::size_t nblocks = (count + block - 1) / block;
  std::vector<std::complex<double>> partial(nblocks);
  detail::run_blocks(nblocks, threads, [&](std::size_t b) {
    const std::size_t lo = b * block;
    const std::size_t hi = std::min(count, lo + block);
    partial[b] = fn(lo, hi);
  });
  KahanComplex acc;
  for (auto v : partial) acc.add(v);
  return acc.value();
}

}  // namespace reslab
