// core/include/binderev/fft.h

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

#ifndef BINDEREV_FFT_H_
#define BINDEREV_FFT_H_

#include <complex>
#include <cstddef>
#include <vector>

namespace binderev {

// Iterative radix-2 FFT, in place.  data->size() must be a power of two.
// No planner state, so calls are thread-safe and bit-reproducible.
// The inverse includes the 1/n scaling.
void fft(std::vector<std::complex<double>>* data, bool inverse = false);

// Smallest power of two >= n (n = 0 maps to 1).
std::size_t next_pow2(std::size_t n);

// Forward real FFT: x is zero-padded (or truncated) to nfft, returns the
// one-sided spectrum of nfft/2 + 1 bins.  nfft must be a power of two.
std::vector<std::complex<double>> rfft(const std::vector<double>& x,
                                       std::size_t nfft);

// Inverse of rfft: one-sided spectrum of nfft/2 + 1 bins -> nfft real
// samples.  Conjugate symmetry of the implied full spectrum is enforced by
// construction (the imaginary part of the result is discarded).
std::vector<double> irfft(const std::vector<std::complex<double>>& bins,
                          std::size_t nfft);

}  // namespace binderev

#endif  // BINDEREV_FFT_H_
