#include <doctest.h>

#include <complex>
#include <cstdint>
#include <vector>

#include "reslab/dft.hpp"

using namespace reslab;

namespace {

using cd = std::complex<double>;

// Quadratic-time oracle with the same e(+kn/L) kernel.
std::vector<cd> dft_oracle(const std::vector<cd>& in) {
  const std::size_t L = in.size();
  std::vector<cd> out(L);
  for (std::size_t k = 0; k < L; ++k) {
    cd acc;
    for (std::size_t n = 0; n < L; ++n) {
      const double angle = 2.0 * kPi *
                           static_cast<double>((k * n) % L) /
                           static_cast<double>(L);
      acc += in[n] * std::polar(1.0, angle);
    }
    out[k] = acc;
  }
  return out;
}

std::vector<cd> random_input(std::size_t L, std::uint64_t seed) {
  std::vector<cd> v(L);
  std::uint64_t state = seed;
  for (auto& z : v) {
    state = splitmix64(state);
    const double re = unit_double(state) * 2.0 - 1.0;
    state = splitmix64(state);
    const double im = unit_double(state) * 2.0 - 1.0;
    z = {re, im};
  }
  return v;
}

}  // namespace

TEST_CASE("transform matches the quadratic oracle at many lengths") {
  for (std::size_t L : {1, 2, 3, 4, 5, 8, 12, 16, 100, 101, 255, 360, 1009}) {
    CAPTURE(L);
    const Dft plan(L);
    const auto in = random_input(L, 1000 + L);
    const auto got = plan(in);
    const auto want = dft_oracle(in);
    REQUIRE(got.size() == L);
    double worst = 0.0;
    for (std::size_t k = 0; k < L; ++k) worst = std::max(worst, std::abs(got[k] - want[k]));
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("impulse and constant inputs") {
  const std::size_t L = 30;
  const Dft plan(L);
  std::vector<cd> impulse(L);
  impulse[0] = 1.0;
  for (const auto& v : plan(impulse)) CHECK(std::abs(v - cd(1, 0)) < 1e-12);
  std::vector<cd> constant(L, cd(1, 0));
  const auto spec = plan(constant);
  CHECK(std::abs(spec[0] - cd(static_cast<double>(L), 0)) < 1e-10);
  for (std::size_t k = 1; k < L; ++k) CHECK(std::abs(spec[k]) < 1e-10);
}

TEST_CASE("plan reuse and input validation") {
  const Dft plan(37);
  const auto in = random_input(37, 5);
  const auto a = plan(in);
  const auto b = plan(in);
  for (std::size_t k = 0; k < 37; ++k) CHECK(a[k] == b[k]);
  CHECK_THROWS_AS(plan(random_input(36, 5)), validation_error);
  CHECK_THROWS_AS(Dft(0), validation_error);
}
