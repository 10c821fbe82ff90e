#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "reslab/modular.hpp"
#include "reslab/util.hpp"

namespace reslab {

// Completely multiplicative unimodular coefficient functions, specified by
// their values at primes. Evaluation works in angle space: arg f(n) is the
// exponent-weighted sum of prime angles, so |f(n)| = 1 holds exactly.
enum class MultFnKind { One, Archimedean, Steinhaus, Arc };

struct MultFnSpec {
  MultFnKind kind = MultFnKind::One;
  double t = 0.0;          // Archimedean: f(n) = n^{it}
  std::uint64_t seed = 0;  // Steinhaus / Arc
  double eps = 0.0;        // Arc: prime angles uniform in [-eps, eps]

  static MultFnSpec one() { return {}; }

  static MultFnSpec archimedean(double t) {
    MultFnSpec s;
    s.kind = MultFnKind::Archimedean;
    s.t = t;
    return s;
  }

  static MultFnSpec steinhaus(std::uint64_t seed) {
    MultFnSpec s;
    s.kind = MultFnKind::Steinhaus;
    s.seed = seed;
    return s;
  }

  static MultFnSpec arc(std::uint64_t seed, double eps) {
    if (!(eps > 0.0 && eps < kPi / 2))
      throw validation_error("arc: eps must lie in (0, pi/2)");
    MultFnSpec s;
    s.kind = MultFnKind::Arc;
    s.seed = seed;
    s.eps = eps;
    return s;
  }

  // Grammar: one | nit:<t> | steinhaus:<seed> | arc:<seed>:<eps>
  static MultFnSpec parse(std::string_view text);

  std::string to_string() const;
};

// arg f(p). Steinhaus and Arc draw the prime angle from the documented
// SplitMix64 stream hash_pair(seed, p), mapped to [0, 1) by unit_double.
inline double prime_angle(const MultFnSpec& f, std::uint64_t p) {
  switch (f.kind) {
    case MultFnKind::One:
      return 0.0;
    case MultFnKind::Archimedean:
      return f.t * std::log(static_cast<double>(p));
    case MultFnKind::Steinhaus:
      return 2.0 * kPi * unit_double(hash_pair(f.seed, p));
    case MultFnKind::Arc:
      return f.eps * (2.0 * unit_double(hash_pair(f.seed, p)) - 1.0);
  }
  throw validation_error("prime_angle: unknown variant");
}

// arg f(n), additive over the prime factorization. The Archimedean variant
// is evaluated directly as t*log n, which agrees with the factored form up
// to rounding.
inline double f_angle(const MultFnSpec& f, std::uint64_t n,
                      const SpfSieve& sieve) {
  if (n == 0) throw validation_error("f_angle: n must be positive");
  if (f.kind == MultFnKind::One) return 0.0;
  if (f.kind == MultFnKind::Archimedean)
    return f.t * std::log(static_cast<double>(n));
  if (n > sieve.limit)
    throw validation_error("f_angle: n exceeds the sieve limit");
  double angle = 0.0;
  while (n > 1) {
    const std::uint64_t p = sieve.spf[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    angle += static_cast<double>(e) * prime_angle(f, p);
  }
  return angle;
}

inline std::complex<double> f_eval(const MultFnSpec& f, std::uint64_t n,
                                   const SpfSieve& sieve) {
  return std::polar(1.0, f_angle(f, n, sieve));
}

// min over the pair family of Re f(a) * conj(f(b)).
inline double pairwise_re_lower_bound(
    const MultFnSpec& f,
    std::span<const std::pair<std::uint64_t, std::uint64_t>> pairs,
    const SpfSieve& sieve) {
  if (pairs.empty())
    throw validation_error("pairwise_re_lower_bound: empty pair family");
  double lo = 1.0;
  for (const auto& [a, b] : pairs) {
    lo = std::min(lo, std::cos(f_angle(f, a, sieve) - f_angle(f, b, sieve)));
  }
  return lo;
}

namespace detail {

inline std::uint64_t parse_u64(std::string_view s, const char* what) {
  if (s.empty()) throw validation_error(std::string(what) + ": empty field");
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9')
      throw validation_error(std::string(what) + ": expected an integer, got '" +
                             std::string(s) + "'");
    const std::uint64_t d = static_cast<std::uint64_t>(c - '0');
    if (v > (~std::uint64_t{0} - d) / 10)
      throw validation_error(std::string(what) + ": integer overflow");
    v = v * 10 + d;
  }
  return v;
}

inline double parse_double(std::string_view s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used != s.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw validation_error(std::string(what) + ": expected a number, got '" +
                           std::string(s) + "'");
  }
}

}  // namespace detail

inline MultFnSpec MultFnSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "one") {
    if (!rest.empty()) throw validation_error("f spec: 'one' takes no arguments");
    return one();
  }
  if (head == "nit") return archimedean(detail::parse_double(rest, "f spec nit"));
  if (head == "steinhaus")
    return steinhaus(detail::parse_u64(rest, "f spec steinhaus"));
  if (head == "arc") {
    const auto mid = rest.find(':');
    if (mid == std::string_view::npos)
      throw validation_error("f spec: arc needs <seed>:<eps>");
    return arc(detail::parse_u64(rest.substr(0, mid), "f spec arc seed"),
               detail::parse_double(rest.substr(mid + 1), "f spec arc eps"));
  }
  throw validation_error("f spec: unknown variant '" + std::string(text) +
                         "' (expected one | nit:<t> | steinhaus:<seed> | "
                         "arc:<seed>:<eps>)");
}

inline std::string MultFnSpec::to_string() const {
  switch (kind) {
    case MultFnKind::One:
      return "one";
    case MultFnKind::Archimedean: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "nit:%.17g", t);
      return buf;
    }
    case MultFnKind::Steinhaus:
      return "steinhaus:" + std::to_string(seed);
    case MultFnKind::Arc: {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "arc:%llu:%.17g",
                    static_cast<unsigned long long>(seed), eps);
      return buf;
    }
  }
  return "one";
}

}  // namespace reslab
