#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "reslab/gcdsum.hpp"

using namespace reslab;
using doctest::Approx;

namespace {

// lcm-route oracle, independent of the g^2/(mn) evaluation path
double gcd_sum_oracle(const GcdSet& set) {
  long double total = 0.0L;
  for (std::uint64_t m : set.members) {
    for (std::uint64_t n : set.members) {
      const std::uint64_t g = std::gcd(m, n);
      const std::uint64_t lcm = m / g * n;
      total += std::sqrt(static_cast<long double>(g) /
                         static_cast<long double>(lcm));
    }
  }
  return static_cast<double>(total);
}

}  // namespace

TEST_CASE("gcd_sum hand values") {
  CHECK(gcd_sum(make_gcd_set({5})) == Approx(1.0));
  const double g = gcd_sum(make_gcd_set({1, 2}));
  CHECK(g == Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
  CHECK(normalized_gcd_sum(make_gcd_set({1, 2})) ==
        Approx((2.0 + std::sqrt(2.0)) / 2.0).epsilon(1e-12));
  CHECK(normalized_gcd_sum(make_gcd_set({9})) == Approx(1.0));
}

TEST_CASE("gcd_sum against the lcm oracle and scale invariance") {
  std::uint64_t state = 4242;
  auto next = [&state] {
    state = splitmix64(state);
    return state;
  };
  for (int t = 0; t < 40; ++t) {
    std::vector<std::uint64_t> members;
    const std::size_t k = 2 + next() % 63;
    while (members.size() < k) members.push_back(1 + next() % 100000);
    const GcdSet set = make_gcd_set(members);
    const double got = gcd_sum(set);
    CHECK(got == Approx(gcd_sum_oracle(set)).epsilon(1e-12));
    CHECK(normalized_gcd_sum(set) >= 1.0 - 1e-12);
    for (std::uint64_t c : {2ULL, 3ULL, 7ULL}) {
      std::vector<std::uint64_t> scaled;
      for (std::uint64_t m : set.members) scaled.push_back(c * m);
      CHECK(gcd_sum(make_gcd_set(scaled)) == Approx(got).epsilon(1e-12));
    }
  }
  // worker count does not change the value
  const GcdSet set = make_gcd_set({2, 3, 4, 6, 9, 12, 30, 210, 2310});
  CHECK(gcd_sum(set, 1) == gcd_sum(set, 4));
}

TEST_CASE("normalized interval value against the quadratic oracle") {
  std::vector<std::uint64_t> interval(100);
  std::iota(interval.begin(), interval.end(), 1);
  const GcdSet set = make_gcd_set(interval);
  CHECK(normalized_gcd_sum(set) ==
        Approx(gcd_sum_oracle(set) / 100.0).epsilon(1e-12));
}

TEST_CASE("make_gcd_set normalizes input") {
  const GcdSet set = make_gcd_set({6, 2, 2, 4});
  CHECK(set.members == std::vector<std::uint64_t>{2, 4, 6});
  CHECK(set.y_m == 3);
  CHECK_THROWS_AS(make_gcd_set({}), validation_error);
  CHECK_THROWS_AS(make_gcd_set({0, 1}), validation_error);
}

TEST_CASE("bt_exponent") {
  // K near exp(exp(e)): log K = e^e, log2 K = e, log3 K = 1
  const std::uint64_t k = static_cast<std::uint64_t>(
      std::llround(std::exp(std::exp(std::exp(1.0)))));
  const double l1 = std::log(static_cast<double>(k));
  const double want =
      2.0 * std::sqrt(2.0) *
      std::sqrt(l1 * std::log(std::log(l1)) / std::log(l1));
  CHECK(bt_exponent(k) == Approx(want).epsilon(1e-12));
  CHECK(bt_exponent(k) == Approx(6.6785).epsilon(1e-3));

  CHECK_THROWS_AS(bt_exponent(15), validation_error);  // log3 <= 0
  CHECK_THROWS_AS(bt_exponent(2), validation_error);
  CHECK_THROWS_AS(bt_exponent(0), validation_error);
  CHECK_NOTHROW(bt_exponent(16));

  double prev = 0.0;
  for (std::uint64_t kk = 16; kk < 3000000; kk *= 3) {
    CHECK(bt_exponent(kk) > prev);
    prev = bt_exponent(kk);
  }
}

TEST_CASE("build_smooth_pool") {
  const SpfSieve sieve = build_spf_sieve(40000);
  CHECK(build_smooth_pool(SearchConfig{2, 10, 0, 1}, sieve) ==
        std::vector<std::uint64_t>{1, 2});
  CHECK(build_smooth_pool(SearchConfig{3, 10, 0, 1}, sieve) ==
        std::vector<std::uint64_t>{1, 2, 3, 6});
  CHECK(build_smooth_pool(SearchConfig{13, 30030, 0, 1}, sieve).size() == 64);
  CHECK_THROWS_AS(build_smooth_pool(SearchConfig{1, 10, 0, 1}, sieve),
                  validation_error);
  CHECK_THROWS_AS(build_smooth_pool(SearchConfig{13, 50000, 0, 1}, sieve),
                  validation_error);  // bound above the sieve limit
}

TEST_CASE("greedy_search") {
  const SpfSieve sieve = build_spf_sieve(40000);

  SUBCASE("zero iterations return the most-factors initial set") {
    const GcdSet set = greedy_search(4, SearchConfig{13, 30030, 0, 1}, sieve);
    // the four 6- and 5-factor squarefree products below 30030 with the
    // smallest values: 30030, 30030/13, 30030/11, 30030/7
    CHECK(set.members == std::vector<std::uint64_t>{2310, 2730, 4290, 30030});
  }

  SUBCASE("objective is monotone in the iteration budget") {
    double prev = 0.0;
    for (std::uint64_t iters : {std::uint64_t{0}, std::uint64_t{5},
                                std::uint64_t{25}, std::uint64_t{100}}) {
      const GcdSet set =
          greedy_search(16, SearchConfig{13, 30030, iters, 1}, sieve);
      const double val = gcd_sum(set);
      CHECK(val >= prev - 1e-9);
      prev = val;
    }
  }

  SUBCASE("beats the plain interval at K = 16") {
    const GcdSet found = greedy_search(16, SearchConfig{13, 30030, 100, 1}, sieve);
    std::vector<std::uint64_t> interval(16);
    std::iota(interval.begin(), interval.end(), 1);
    CHECK(normalized_gcd_sum(found) >=
          normalized_gcd_sum(make_gcd_set(interval)));
  }

  SUBCASE("deterministic in the seed") {
    const GcdSet a = greedy_search(16, SearchConfig{13, 30030, 40, 9}, sieve);
    const GcdSet b = greedy_search(16, SearchConfig{13, 30030, 40, 9}, sieve);
    CHECK(a.members == b.members);
  }

  SUBCASE("pool smaller than K is rejected") {
    CHECK_THROWS_AS(greedy_search(65, SearchConfig{13, 30030, 0, 1}, sieve),
                    validation_error);
  }
}

TEST_CASE("tail_check") {
  SUBCASE("hand case M = {1, 2}, N = 1: every pair is in the tail") {
    const auto rep = tail_check(make_gcd_set({1, 2}), 1, 0.2);
    CHECK(rep.threshold == Approx(0.5));
    CHECK(rep.tail == Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
    CHECK(rep.tail == Approx(gcd_sum(make_gcd_set({1, 2}))).epsilon(1e-12));
    CHECK(rep.chebyshev_ok);
  }

  SUBCASE("large N empties the tail") {
    const auto rep = tail_check(make_gcd_set({2, 3, 5, 30}), 100, 0.1);
    CHECK(rep.tail == 0.0);
    CHECK(rep.chebyshev_ok);
  }

  SUBCASE("relaxed lies in [K, K^2]") {
    const GcdSet set = make_gcd_set({3, 5, 7, 11, 13});
    const auto rep = tail_check(set, 2, 0.15);
    CHECK(rep.relaxed >= 5.0 - 1e-12);
    CHECK(rep.relaxed <= 25.0 + 1e-12);
  }

  SUBCASE("chebyshev holds on random instances with eta = delta/3") {
    std::uint64_t state = 777;
    auto next = [&state] {
      state = splitmix64(state);
      return state;
    };
    for (int t = 0; t < 100; ++t) {
      std::vector<std::uint64_t> members;
      const std::size_t k = 2 + next() % 40;
      while (members.size() < k) members.push_back(1 + next() % 5000);
      const double delta = 1e-4 + unit_double(next()) * (0.01 - 2e-4);
      const std::uint64_t n_len = 1 + next() % 50;
      const auto rep = tail_check(make_gcd_set(members), n_len, delta / 3.0);
      CHECK(rep.chebyshev_ok);
      CHECK(rep.tail <= rep.chebyshev_factor * rep.relaxed * (1.0 + 1e-12));
    }
  }

  SUBCASE("eta range is validated") {
    CHECK_THROWS_AS(tail_check(make_gcd_set({1, 2}), 10, 0.6), validation_error);
    CHECK_THROWS_AS(tail_check(make_gcd_set({1, 2}), 10, 0.0), validation_error);
    CHECK_THROWS_AS(tail_check(make_gcd_set({1, 2}), 0, 0.1), validation_error);
  }

  SUBCASE("ordered-pair symmetry: diagonal plus twice the upper triangle") {
    const GcdSet set = make_gcd_set({4, 6, 9, 10, 15});
    long double upper = 0.0L;
    for (std::size_t i = 0; i < set.members.size(); ++i) {
      for (std::size_t j = i + 1; j < set.members.size(); ++j) {
        const std::uint64_t g = std::gcd(set.members[i], set.members[j]);
        upper += std::sqrt(static_cast<long double>(g) * g /
                           (static_cast<long double>(set.members[i]) *
                            set.members[j]));
      }
    }
    const double expected =
        static_cast<double>(set.members.size()) + 2.0 * static_cast<double>(upper);
    CHECK(gcd_sum(set) == Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("set file IO") {
  const char* path = "reslab_test_set.txt";
  write_set_file(path, make_gcd_set({10, 2, 6}));
  const GcdSet back = read_set_file(path);
  CHECK(back.members == std::vector<std::uint64_t>{2, 6, 10});

  {
    std::ofstream f(path);
    f << "# comment line\n 5 # trailing comment\n\n7\n";
  }
  const GcdSet commented = read_set_file(path);
  CHECK(commented.members == std::vector<std::uint64_t>{5, 7});

  {
    std::ofstream f(path);
    f << "5\nnot-a-number\n";
  }
  CHECK_THROWS_AS(read_set_file(path), validation_error);
  CHECK_THROWS_AS(read_set_file("does_not_exist.txt"), validation_error);
  std::remove(path);
}
