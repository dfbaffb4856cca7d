// core/src/linalg.h
// Internal: tiny dense complex solver for the WPE normal equations.

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

#ifndef BINDEREV_SRC_LINALG_H_
#define BINDEREV_SRC_LINALG_H_

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace binderev {
namespace internal {

// In-place Cholesky factorization of a Hermitian positive-definite matrix
// (row-major n x n; only the lower triangle is referenced) followed by the
// two triangular solves.  Returns false when a pivot is not safely positive,
// which the caller treats as "singular even after diagonal loading".
inline bool cholesky_solve(std::vector<std::complex<double>>* a_storage,
                           std::size_t n,
                           std::vector<std::complex<double>>* b) {
  auto& a = *a_storage;
  auto at = [&](std::size_t r, std::size_t c) -> std::complex<double>& {
    return a[r * n + c];
  };

  for (std::size_t j = 0; j < n; ++j) {
    double diag = at(j, j).real();
    for (std::size_t k = 0; k < j; ++k) diag -= std::norm(at(j, k));
    if (!(diag > 0.0) || !std::isfinite(diag)) return false;
    const double ljj = std::sqrt(diag);
    at(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      std::complex<double> v = at(i, j);
      for (std::size_t k = 0; k < j; ++k)
        v -= at(i, k) * std::conj(at(j, k));
      at(i, j) = v / ljj;
    }
  }

  // L y = b
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> v = (*b)[i];
    for (std::size_t k = 0; k < i; ++k) v -= at(i, k) * (*b)[k];
    (*b)[i] = v / at(i, i).real();
  }
  // L^H x = y
  for (std::size_t i = n; i-- > 0;) {
    std::complex<double> v = (*b)[i];
    for (std::size_t k = i + 1; k < n; ++k)
      v -= std::conj(at(k, i)) * (*b)[k];
    (*b)[i] = v / at(i, i).real();
  }
  return true;
}

}  // namespace internal
}  // namespace binderev

#endif  // BINDEREV_SRC_LINALG_H_
