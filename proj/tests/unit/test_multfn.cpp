#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "reslab/multfn.hpp"

using namespace reslab;
using doctest::Approx;

TEST_CASE("spec grammar round trips") {
  CHECK(MultFnSpec::parse("one").kind == MultFnKind::One);
  const auto nit = MultFnSpec::parse("nit:0.5");
  CHECK(nit.kind == MultFnKind::Archimedean);
  CHECK(nit.t == Approx(0.5));
  const auto st = MultFnSpec::parse("steinhaus:42");
  CHECK(st.kind == MultFnKind::Steinhaus);
  CHECK(st.seed == 42);
  const auto arc = MultFnSpec::parse("arc:1:0.1");
  CHECK(arc.kind == MultFnKind::Arc);
  CHECK(arc.seed == 1);
  CHECK(arc.eps == Approx(0.1));
  for (const char* s : {"one", "nit:0.5", "steinhaus:42", "arc:1:0.1"}) {
    CHECK(MultFnSpec::parse(MultFnSpec::parse(s).to_string()).to_string() ==
          MultFnSpec::parse(s).to_string());
  }
  CHECK_THROWS_AS(MultFnSpec::parse("bogus"), validation_error);
  CHECK_THROWS_AS(MultFnSpec::parse("steinhaus:x"), validation_error);
  CHECK_THROWS_AS(MultFnSpec::parse("arc:1"), validation_error);
  CHECK_THROWS_AS(MultFnSpec::parse("arc:1:2.0"), validation_error);  // eps >= pi/2
  CHECK_THROWS_AS(MultFnSpec::parse("one:1"), validation_error);
}

TEST_CASE("f_eval basics") {
  const SpfSieve sieve = build_spf_sieve(10000);
  const MultFnSpec one = MultFnSpec::one();
  for (std::uint64_t n : {1ULL, 2ULL, 360ULL, 9973ULL}) {
    CHECK(std::abs(f_eval(one, n, sieve) - std::complex<double>(1, 0)) < 1e-15);
  }
  for (const char* s : {"nit:0.7", "steinhaus:3", "arc:9:0.2"}) {
    const auto f = MultFnSpec::parse(s);
    CHECK(std::abs(f_eval(f, 1, sieve) - std::complex<double>(1, 0)) < 1e-15);
  }
  // complete multiplicativity forces f(4) = f(2)^2
  const auto st = MultFnSpec::steinhaus(5);
  const auto f2 = f_eval(st, 2, sieve);
  CHECK(std::abs(f_eval(st, 4, sieve) - f2 * f2) < 1e-12);
  CHECK(f_angle(st, 4, sieve) == Approx(2.0 * f_angle(st, 2, sieve)));
  CHECK_THROWS_AS(f_eval(st, 0, sieve), validation_error);
  CHECK_THROWS_AS(f_eval(st, 10001, sieve), validation_error);
}

TEST_CASE("f is unimodular and completely multiplicative") {
  const SpfSieve sieve = build_spf_sieve(100000);
  std::uint64_t state = 99;
  auto next = [&state] {
    state = splitmix64(state);
    return state;
  };
  for (const char* s : {"one", "nit:1.3", "steinhaus:1", "arc:1:0.4"}) {
    const auto f = MultFnSpec::parse(s);
    for (int t = 0; t < 300; ++t) {
      const std::uint64_t m = 1 + next() % 316;
      const std::uint64_t n = 1 + next() % 316;
      const auto lhs = f_eval(f, m * n, sieve);
      const auto rhs = f_eval(f, m, sieve) * f_eval(f, n, sieve);
      CHECK(std::abs(lhs - rhs) < 1e-12);
      CHECK(std::abs(std::abs(lhs) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("archimedean variant is n^{it}") {
  const SpfSieve sieve = build_spf_sieve(1000);
  const auto f = MultFnSpec::archimedean(2.5);
  for (std::uint64_t n : {2ULL, 10ULL, 997ULL}) {
    const auto want = std::exp(std::complex<double>(
        0, 2.5 * std::log(static_cast<double>(n))));
    CHECK(std::abs(f_eval(f, n, sieve) - want) < 1e-12);
  }
}

TEST_CASE("determinism of seeded variants") {
  const SpfSieve sieve = build_spf_sieve(1000);
  const auto a = MultFnSpec::steinhaus(7);
  const auto b = MultFnSpec::parse("steinhaus:7");
  for (std::uint64_t n = 1; n <= 1000; ++n) {
    CHECK(f_angle(a, n, sieve) == f_angle(b, n, sieve));
  }
  // distinct seeds give distinct streams
  CHECK(f_angle(MultFnSpec::steinhaus(8), 2, sieve) !=
        f_angle(MultFnSpec::steinhaus(7), 2, sieve));
}

TEST_CASE("arc prime angles stay inside [-eps, eps]") {
  const SpfSieve sieve = build_spf_sieve(10000);
  const double eps = 0.25;
  const auto f = MultFnSpec::arc(11, eps);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> prime_pairs;
  std::uint64_t prev = 0;
  for (std::uint64_t p = 2; p <= 9999; ++p) {
    if (sieve.spf[p] != p) continue;
    const double a = f_angle(f, p, sieve);
    CHECK(a >= -eps);
    CHECK(a <= eps);
    if (prev != 0) prime_pairs.emplace_back(prev, p);
    prev = p;
  }
  // angle difference of two primes lies in [-2 eps, 2 eps]
  CHECK(pairwise_re_lower_bound(f, prime_pairs, sieve) >=
        std::cos(2 * eps) - 1e-12);
}

TEST_CASE("pairwise_re_lower_bound") {
  const SpfSieve sieve = build_spf_sieve(1000);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs = {{6, 35},
                                                                {10, 21}};
  CHECK(pairwise_re_lower_bound(MultFnSpec::one(), pairs, sieve) ==
        Approx(1.0));
  std::vector<std::pair<std::uint64_t, std::uint64_t>> diag = {{77, 77}};
  CHECK(pairwise_re_lower_bound(MultFnSpec::steinhaus(3), diag, sieve) ==
        Approx(1.0));
  std::vector<std::pair<std::uint64_t, std::uint64_t>> empty;
  CHECK_THROWS_AS(pairwise_re_lower_bound(MultFnSpec::one(), empty, sieve),
                  validation_error);
}
