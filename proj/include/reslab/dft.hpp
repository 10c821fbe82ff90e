#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "reslab/util.hpp"

namespace reslab {

// Batch evaluator for sums of the form
//
//   out[k] = sum_{n < L} in[n] * e(k n / L),   e(x) = exp(2 pi i x),
//
// which is what "evaluate S_chi for every character mod q at once" reduces
// to after bucketing by discrete log (L = q - 1). Power-of-two lengths run
// a radix-2 FFT directly. General lengths go through Bluestein's chirp-z
// identity
//
//   n k = (n^2 + k^2 - (k - n)^2) / 2,
//
// turning the transform into one circular convolution of power-of-two size
// M >= 2L - 1. The convolution pairs a decimation-in-frequency forward pass
// with a decimation-in-time backward pass, so no bit-reversal permutation is
// ever applied; the kernel spectrum is cached in the permuted order the DIF
// pass produces. Chirp angles are reduced with n^2 mod 2L in integer
// arithmetic before the trigonometric evaluation, so they stay accurate for
// large n. Construction is O(M log M) and is meant to be reused across
// calls of the same length.
class Dft {
 public:
  explicit Dft(std::size_t length) : len_(length) {
    if (length == 0) throw validation_error("Dft: length must be positive");
    std::size_t m = len_;
    if (!is_pow2(len_)) {
      m = 1;
      while (m < 2 * len_ - 1) m <<= 1;
    }
    conv_ = m;
    build_twiddles(m);
    if (is_pow2(len_)) {
      bitrev_.assign(m, 0);
      for (std::size_t i = 1, j = 0; i < m; ++i) {
        std::size_t bit = m >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        bitrev_[i] = j;
      }
      return;
    }
    chirp_.resize(len_);
    const std::uint64_t period = 2 * static_cast<std::uint64_t>(len_);
    for (std::size_t n = 0; n < len_; ++n) {
      const std::uint64_t r = static_cast<std::uint64_t>(
          static_cast<unsigned __int128>(n) * n % period);
      chirp_[n] = std::polar(
          1.0, kPi * static_cast<double>(r) / static_cast<double>(len_));
    }
    // Kernel c[d] = conj(chirp[|d|]) embedded circularly in size M; its
    // spectrum stays in DIF (bit-reversed) order.
    std::vector<cd> kernel(m, cd{});
    kernel[0] = std::conj(chirp_[0]);
    for (std::size_t d = 1; d < len_; ++d) {
      kernel[d] = std::conj(chirp_[d]);
      kernel[m - d] = std::conj(chirp_[d]);
    }
    dif_forward(kernel);
    chirp_fft_ = std::move(kernel);
  }

  std::size_t length() const { return len_; }

  std::vector<std::complex<double>> operator()(
      const std::vector<std::complex<double>>& input) const {
    if (input.size() != len_)
      throw validation_error("Dft: input length mismatch");
    if (is_pow2(len_)) {
      auto a = input;
      dif_forward(a);
      std::vector<cd> out(len_);
      for (std::size_t i = 0; i < len_; ++i) out[bitrev_[i]] = a[i];
      return out;
    }
    std::vector<cd> a(conv_, cd{});
    for (std::size_t n = 0; n < len_; ++n) a[n] = input[n] * chirp_[n];
    dif_forward(a);
    for (std::size_t i = 0; i < conv_; ++i) a[i] *= chirp_fft_[i];
    dit_backward(a);
    const double scale = 1.0 / static_cast<double>(conv_);
    std::vector<cd> out(len_);
    for (std::size_t k = 0; k < len_; ++k) out[k] = chirp_[k] * a[k] * scale;
    return out;
  }

 private:
  using cd = std::complex<double>;

  static bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

  // stage_tw_[stage_off_[s] + j] = e(+ j / 2^s) for j < 2^{s-1}
  void build_twiddles(std::size_t m) {
    std::size_t stages = 0;
    while ((std::size_t{1} << stages) < m) ++stages;
    stage_off_.assign(stages + 1, 0);
    stage_tw_.resize(m > 1 ? m - 1 : 0);
    std::size_t off = 0;
    for (std::size_t s = 1; s <= stages; ++s) {
      stage_off_[s] = off;
      const std::size_t len = std::size_t{1} << s;
      for (std::size_t j = 0; j < len / 2; ++j) {
        stage_tw_[off + j] = std::polar(
            1.0, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(len));
      }
      off += len / 2;
    }
  }

  // Kernel e(+nk/m); natural-order input, bit-reversed output.
  void dif_forward(std::vector<cd>& a) const {
    const std::size_t m = a.size();
    std::size_t s = 0;
    while ((std::size_t{1} << s) < m) ++s;
    for (std::size_t len = m; len >= 2; len >>= 1, --s) {
      const std::size_t half = len >> 1;
      const cd* tw = stage_tw_.data() + stage_off_[s];
      for (std::size_t i = 0; i < m; i += len) {
        cd* lo = a.data() + i;
        cd* hi = lo + half;
        const cd u0 = lo[0];
        lo[0] = u0 + hi[0];
        hi[0] = u0 - hi[0];
        for (std::size_t j = 1; j < half; ++j) {
          const cd u = lo[j];
          const cd v = hi[j];
          lo[j] = u + v;
          hi[j] = (u - v) * tw[j];
        }
      }
    }
  }

  // Kernel e(-nk/m); bit-reversed input, natural-order output.
  void dit_backward(std::vector<cd>& a) const {
    const std::size_t m = a.size();
    std::size_t s = 1;
    for (std::size_t len = 2; len <= m; len <<= 1, ++s) {
      const std::size_t half = len >> 1;
      const cd* tw = stage_tw_.data() + stage_off_[s];
      for (std::size_t i = 0; i < m; i += len) {
        cd* lo = a.data() + i;
        cd* hi = lo + half;
        const cd v0 = hi[0];
        hi[0] = lo[0] - v0;
        lo[0] += v0;
        for (std::size_t j = 1; j < half; ++j) {
          const cd v = hi[j] * std::conj(tw[j]);
          const cd u = lo[j];
          lo[j] = u + v;
          hi[j] = u - v;
        }
      }
    }
  }

  std::size_t len_ = 0;
  std::size_t conv_ = 0;
  std::vector<std::size_t> stage_off_;
  std::vector<cd> stage_tw_;
  std::vector<std::size_t> bitrev_;  // pow2 direct path only
  std::vector<cd> chirp_;
  std::vector<cd> chirp_fft_;
};

}  // namespace reslab
