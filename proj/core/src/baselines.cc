// core/src/baselines.cc

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

#include "binderev/baselines.h"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "linalg.h"

namespace binderev {

void validate(const SpecSubConfig& cfg) {
  if (!(cfg.rt60_s > 0.0))
    throw std::invalid_argument("spectral subtraction: rt60_s must be positive");
  if (!(cfg.late_boundary_ms > 0.0))
    throw std::invalid_argument(
        "spectral subtraction: late boundary must be positive");
  if (!(cfg.gain_floor > 0.0) || cfg.gain_floor >= 1.0)
    throw std::invalid_argument(
        "spectral subtraction: gain_floor must lie in (0, 1)");
  if (cfg.smoothing < 0.0 || cfg.smoothing >= 1.0)
    throw std::invalid_argument(
        "spectral subtraction: smoothing must lie in [0, 1)");
}

Waveform spectral_subtraction(const Waveform& x, const SpecSubConfig& cfg,
                              const StftConfig& stft_cfg,
                              Grid<double>* gains_out) {
  validate(cfg);
  Spectrogram spec = stft(x, stft_cfg);
  const std::size_t bins = spec.bins();
  const std::size_t frames = spec.frames();

  const double t_late = cfg.late_boundary_ms / 1000.0;
  const std::size_t n_late = static_cast<std::size_t>(std::lround(
      t_late * spec.sample_rate_hz / static_cast<double>(stft_cfg.hop)));
  const double rho = 3.0 * std::log(10.0) / cfg.rt60_s;
  const double decay = std::exp(-2.0 * rho * t_late);

  // Recursively smoothed observed PSD.
  Grid<double> psd(bins, frames);
  for (std::size_t k = 0; k < bins; ++k) {
    double prev = 0.0;
    for (std::size_t m = 0; m < frames; ++m) {
      const double inst = std::norm(spec.data.at(k, m));
      prev = (m == 0) ? inst
                      : cfg.smoothing * prev + (1.0 - cfg.smoothing) * inst;
      psd.at(k, m) = prev;
    }
  }

  Grid<double> gains(bins, frames, 1.0);
  for (std::size_t k = 0; k < bins; ++k) {
    for (std::size_t m = n_late; m < frames; ++m) {
      const double lam_x = psd.at(k, m);
      if (lam_x <= 0.0) continue;  // silent bin: nothing to subtract
      const double lam_late = decay * psd.at(k, m - n_late);
      const double g = 1.0 - std::sqrt(lam_late / lam_x);
      gains.at(k, m) = std::max(g, cfg.gain_floor);
    }
  }

  for (std::size_t i = 0; i < spec.data.size(); ++i)
    spec.data.data()[i] *= gains.data()[i];
  if (gains_out != nullptr) *gains_out = gains;
  return istft(spec);
}

void validate(const WpeConfig& cfg) {
  if (cfg.prediction_delay_frames < 1)
    throw std::invalid_argument("wpe: prediction delay must be >= 1");
  if (cfg.filter_order_taps < 1)
    throw std::invalid_argument("wpe: filter order must be >= 1");
  if (cfg.iterations < 1)
    throw std::invalid_argument("wpe: iterations must be >= 1");
  if (!(cfg.psd_floor > 0.0))
    throw std::invalid_argument("wpe: psd_floor must be positive");
}

std::vector<Spectrogram> wpe(const std::vector<Spectrogram>& channels,
                             const WpeConfig& cfg,
                             std::vector<std::vector<double>>* residuals_out) {
  validate(cfg);
  if (channels.empty() || channels.size() > 2)
    throw std::invalid_argument("wpe: need 1 or 2 channels");
  for (std::size_t c = 1; c < channels.size(); ++c)
    check_same_shape(channels[0].data, channels[c].data, "wpe");

  const std::size_t n_ch = channels.size();
  const std::size_t bins = channels[0].bins();
  const std::size_t frames = channels[0].frames();
  const std::size_t delay = static_cast<std::size_t>(cfg.prediction_delay_frames);
  const std::size_t order = static_cast<std::size_t>(cfg.filter_order_taps);
  if (frames <= delay + order)
    throw std::invalid_argument("wpe: too few frames for delay + order");

  std::vector<Spectrogram> out(channels);
  const std::size_t dim = n_ch * order;  // stacked prediction context
  if (residuals_out != nullptr)
    residuals_out->assign(cfg.iterations, std::vector<double>(bins, 0.0));

  std::vector<std::complex<double>> R(dim * dim);
  std::vector<std::complex<double>> stacked(dim);
  std::vector<std::vector<std::complex<double>>> rhs(
      n_ch, std::vector<std::complex<double>>(dim));
  std::vector<std::vector<std::complex<double>>> filters(
      n_ch, std::vector<std::complex<double>>(dim));

  for (std::size_t k = 0; k < bins; ++k) {
    // Working copies of this bin: observation x and running estimate d.
    std::vector<std::vector<std::complex<double>>> x(n_ch),
        d(n_ch);
    for (std::size_t c = 0; c < n_ch; ++c) {
      x[c].assign(channels[c].data.row(k), channels[c].data.row(k) + frames);
      d[c] = x[c];
    }

    auto fill_stacked = [&](std::size_t m) {
      // Stacked delayed context: channels c, taps tau, frame m - delay - tau.
      std::size_t idx = 0;
      for (std::size_t c = 0; c < n_ch; ++c)
        for (std::size_t tau = 0; tau < order; ++tau, ++idx) {
          const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(m) -
                                     static_cast<std::ptrdiff_t>(delay + tau);
          stacked[idx] = (src >= 0) ? x[c][static_cast<std::size_t>(src)]
                                    : std::complex<double>(0.0, 0.0);
        }
    };

    for (int it = 0; it < cfg.iterations; ++it) {
      // (i) PSD from the current estimate.
      std::vector<double> lambda(frames);
      for (std::size_t m = 0; m < frames; ++m) {
        double p = 0.0;
        for (std::size_t c = 0; c < n_ch; ++c) p += std::norm(d[c][m]);
        lambda[m] = std::max(cfg.psd_floor, p / static_cast<double>(n_ch));
      }

      // (ii) Weighted normal equations over the stacked context.
      std::fill(R.begin(), R.end(), std::complex<double>(0.0, 0.0));
      for (std::size_t c = 0; c < n_ch; ++c)
        std::fill(rhs[c].begin(), rhs[c].end(), std::complex<double>(0.0, 0.0));
      for (std::size_t m = 0; m < frames; ++m) {
        fill_stacked(m);
        const double w = 1.0 / lambda[m];
        for (std::size_t i = 0; i < dim; ++i) {
          if (stacked[i] == std::complex<double>(0.0, 0.0)) continue;
          const std::complex<double> wi = stacked[i] * w;
          for (std::size_t j = 0; j <= i; ++j)
            R[i * dim + j] += wi * std::conj(stacked[j]);
          for (std::size_t c = 0; c < n_ch; ++c)
            rhs[c][i] += wi * std::conj(x[c][m]);
        }
      }
      double trace = 0.0;
      for (std::size_t i = 0; i < dim; ++i) trace += R[i * dim + i].real();
      const double ridge = cfg.ridge_scale * std::max(trace, 1e-300);
      for (std::size_t i = 0; i < dim; ++i) R[i * dim + i] += ridge;

      for (std::size_t c = 0; c < n_ch; ++c) {
        auto a = R;  // factorization clobbers its input
        filters[c] = rhs[c];
        if (!internal::cholesky_solve(&a, dim, &filters[c]))
          throw std::runtime_error("wpe: singular normal equations");
      }

      // (iii) Prediction residual becomes the new estimate.
      for (std::size_t m = 0; m < frames; ++m) {
        fill_stacked(m);
        for (std::size_t c = 0; c < n_ch; ++c) {
          std::complex<double> pred(0.0, 0.0);
          for (std::size_t i = 0; i < dim; ++i)
            pred += std::conj(filters[c][i]) * stacked[i];
          d[c][m] = x[c][m] - pred;
        }
      }

      if (residuals_out != nullptr) {
        // Reweighted prediction-error objective at this iteration's weights:
        // sum_m mean_c|d_c(m)|^2 / lambda(m) + ln lambda(m).  Both half-steps
        // (filter solve, PSD update with flooring) can only lower it, so it
        // is non-increasing up to the ridge perturbation; the raw residual
        // energy carries no such guarantee.
        double e = 0.0;
        for (std::size_t m = 0; m < frames; ++m) {
          double p = 0.0;
          for (std::size_t c = 0; c < n_ch; ++c) p += std::norm(d[c][m]);
          e += p / (static_cast<double>(n_ch) * lambda[m]) +
               std::log(lambda[m]);
        }
        (*residuals_out)[static_cast<std::size_t>(it)][k] = e;
      }
    }

    for (std::size_t c = 0; c < n_ch; ++c)
      for (std::size_t m = 0; m < frames; ++m) out[c].data.at(k, m) = d[c][m];
  }
  return out;
}

}  // namespace binderev
