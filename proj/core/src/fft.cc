// core/src/fft.cc

// Copyright 2026  binderev contributors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "binderev/fft.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace binderev {

void fft(std::vector<std::complex<double>>* data, bool inverse) {
  auto& a = *data;
  const std::size_t n = a.size();
  if (n == 0) return;
  if ((n & (n - 1)) != 0)
    throw std::invalid_argument("fft: size must be a power of two");

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang =
        (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }

  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : a) v *= scale;
  }
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<std::complex<double>> rfft(const std::vector<double>& x,
                                       std::size_t nfft) {
  if (nfft == 0 || (nfft & (nfft - 1)) != 0)
    throw std::invalid_argument("rfft: nfft must be a power of two");
  std::vector<std::complex<double>> buf(nfft);
  const std::size_t m = std::min(x.size(), nfft);
  for (std::size_t i = 0; i < m; ++i) buf[i] = x[i];
  fft(&buf);
  buf.resize(nfft / 2 + 1);
  return buf;
}

std::vector<double> irfft(const std::vector<std::complex<double>>& bins,
                          std::size_t nfft) {
  if (nfft == 0 || (nfft & (nfft - 1)) != 0)
    throw std::invalid_argument("irfft: nfft must be a power of two");
  if (bins.size() != nfft / 2 + 1)
    throw std::invalid_argument("irfft: expected nfft/2 + 1 bins");
  std::vector<std::complex<double>> buf(nfft);
  for (std::size_t i = 0; i < bins.size(); ++i) buf[i] = bins[i];
  for (std::size_t i = 1; i + 1 < bins.size(); ++i)
    buf[nfft - i] = std::conj(bins[i]);
  fft(&buf, /*inverse=*/true);
  std::vector<double> out(nfft);
  for (std::size_t i = 0; i < nfft; ++i) out[i] = buf[i].real();
  return out;
}

}  // namespace binderev
