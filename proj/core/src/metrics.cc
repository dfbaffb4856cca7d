// core/src/metrics.cc

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

#include "binderev/metrics.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "binderev/fft.h"
#include "binderev/stft.h"

namespace binderev {

namespace {

constexpr int kMaxLag = 4096;

double dot(const std::vector<double>& a, const std::vector<double>& b,
           std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

std::pair<Waveform, Waveform> align_and_trim(const Waveform& reference,
                                             const Waveform& estimate) {
  validate(reference);
  validate(estimate);
  if (reference.sample_rate_hz != estimate.sample_rate_hz)
    throw std::invalid_argument("align: sample rate mismatch");
  if (reference.samples.empty() || estimate.samples.empty())
    throw std::invalid_argument("align: zero-length data");
  if (energy(reference) <= 0.0 || energy(estimate) <= 0.0)
    throw std::invalid_argument("align: zero-energy input");

  const std::size_t lr = reference.samples.size();
  const std::size_t le = estimate.samples.size();
  const std::size_t nfft = next_pow2(lr + le);

  // corr(lag) = sum_n ref[n] * est[n + lag]; negative lags wrap to the top
  // of the inverse transform.
  std::vector<std::complex<double>> rspec =
      rfft(reference.samples, nfft);
  const std::vector<std::complex<double>> espec =
      rfft(estimate.samples, nfft);
  for (std::size_t i = 0; i < rspec.size(); ++i)
    rspec[i] = std::conj(rspec[i]) * espec[i];
  const std::vector<double> corr = irfft(rspec, nfft);

  const long max_pos = std::min<long>(kMaxLag, static_cast<long>(lr) - 1);
  const long max_neg = std::min<long>(kMaxLag, static_cast<long>(le) - 1);
  long best_lag = 0;
  double best_mag = -1.0;
  for (long lag = -max_neg; lag <= max_pos; ++lag) {
    const std::size_t idx =
        lag >= 0 ? static_cast<std::size_t>(lag)
                 : nfft - static_cast<std::size_t>(-lag);
    const double mag = std::abs(corr[idx]);
    if (mag > best_mag) {
      best_mag = mag;
      best_lag = lag;
    }
  }

  const std::size_t ref_off = best_lag < 0 ? static_cast<std::size_t>(-best_lag) : 0;
  const std::size_t est_off = best_lag > 0 ? static_cast<std::size_t>(best_lag) : 0;
  const std::size_t n = std::min(lr - ref_off, le - est_off);
  Waveform ref_out;
  ref_out.sample_rate_hz = reference.sample_rate_hz;
  ref_out.samples.assign(reference.samples.begin() + ref_off,
                         reference.samples.begin() + ref_off + n);
  Waveform est_out;
  est_out.sample_rate_hz = estimate.sample_rate_hz;
  est_out.samples.assign(estimate.samples.begin() + est_off,
                         estimate.samples.begin() + est_off + n);
  return {std::move(ref_out), std::move(est_out)};
}

double si_sdr(const Waveform& reference, const Waveform& estimate) {
  if (reference.sample_rate_hz != estimate.sample_rate_hz)
    throw std::invalid_argument("si_sdr: sample rate mismatch");
  if (reference.samples.size() != estimate.samples.size())
    throw std::invalid_argument("si_sdr: length mismatch");
  const std::size_t n = reference.samples.size();
  if (n == 0) throw std::invalid_argument("si_sdr: zero-length data");

  const double ref_e = dot(reference.samples, reference.samples, n);
  if (ref_e <= 0.0) throw std::invalid_argument("si_sdr: zero reference");
  const double scale = dot(estimate.samples, reference.samples, n) / ref_e;

  double target_e = 0.0;
  double err_e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = scale * reference.samples[i];
    const double e = estimate.samples[i] - t;
    target_e += t * t;
    err_e += e * e;
  }
  if (target_e <= 0.0) return -kSdrCapDb;
  // A rescaled copy of the reference leaves no residual; cap instead of
  // letting the ratio blow up.
  if (err_e <= target_e * 1e-10) return kSdrCapDb;
  return std::min(kSdrCapDb, 10.0 * std::log10(target_e / err_e));
}

// ---------------------------------------------------------------------------
// STOI
// ---------------------------------------------------------------------------

namespace {

constexpr int kStoiRate = 10000;
constexpr int kStoiFrame = 256;
constexpr int kStoiHop = 128;
constexpr std::size_t kStoiFft = 512;
constexpr int kStoiBands = 15;
constexpr int kStoiSegment = 30;   // frames per analysis segment (384 ms)
constexpr double kStoiDynDb = 40.0;

// MATLAB-style Hann (no zero endpoints).
std::vector<double> stoi_window() {
  std::vector<double> w(kStoiFrame);
  for (int k = 0; k < kStoiFrame; ++k)
    w[k] = 0.5 * (1.0 - std::cos(2.0 * M_PI * (k + 1) / (kStoiFrame + 1)));
  return w;
}

// One-third-octave band magnitudes, frames kept per `keep`.
std::vector<std::vector<double>> stoi_band_mags(
    const std::vector<double>& x, const std::vector<int>& frame_starts,
    const std::vector<double>& window,
    const std::vector<std::pair<int, int>>& band_bins) {
  std::vector<std::vector<double>> out(
      band_bins.size(), std::vector<double>(frame_starts.size(), 0.0));
  std::vector<double> buf(kStoiFrame);
  for (std::size_t m = 0; m < frame_starts.size(); ++m) {
    const int start = frame_starts[m];
    for (int k = 0; k < kStoiFrame; ++k) buf[k] = window[k] * x[start + k];
    const std::vector<std::complex<double>> spec = rfft(buf, kStoiFft);
    for (std::size_t j = 0; j < band_bins.size(); ++j) {
      double acc = 0.0;
      for (int k = band_bins[j].first; k < band_bins[j].second; ++k)
        acc += std::norm(spec[k]);
      out[j][m] = std::sqrt(acc);
    }
  }
  return out;
}

}  // namespace

double stoi(const Waveform& reference, const Waveform& estimate) {
  if (reference.sample_rate_hz != estimate.sample_rate_hz)
    throw std::invalid_argument("stoi: sample rate mismatch");
  if (reference.samples.size() != estimate.samples.size())
    throw std::invalid_argument("stoi: length mismatch");
  if (reference.samples.empty())
    throw std::invalid_argument("stoi: zero-length data");

  const Waveform ref10 = resample(reference, kStoiRate);
  const Waveform est10 = resample(estimate, kStoiRate);
  const std::vector<double>& x = ref10.samples;
  const std::vector<double>& y = est10.samples;
  if (x.size() < static_cast<std::size_t>(kStoiFrame))
    throw std::invalid_argument("stoi: signal shorter than one frame");

  const std::vector<double> window = stoi_window();

  // Silent-frame removal is driven by the reference alone; the same frames
  // are dropped from both signals.
  const int num_frames =
      static_cast<int>((x.size() - kStoiFrame) / kStoiHop) + 1;
  std::vector<double> frame_db(num_frames);
  double max_db = -1e300;
  for (int m = 0; m < num_frames; ++m) {
    double e = 0.0;
    for (int k = 0; k < kStoiFrame; ++k) {
      const double v = window[k] * x[m * kStoiHop + k];
      e += v * v;
    }
    frame_db[m] = 10.0 * std::log10(std::max(e, 1e-300));
    max_db = std::max(max_db, frame_db[m]);
  }
  std::vector<int> kept;
  for (int m = 0; m < num_frames; ++m)
    if (frame_db[m] > max_db - kStoiDynDb) kept.push_back(m * kStoiHop);
  if (static_cast<int>(kept.size()) < kStoiSegment)
    throw std::invalid_argument(
        "stoi: fewer than one segment after silent-frame removal");

  std::vector<std::pair<int, int>> band_bins(kStoiBands);
  for (int j = 0; j < kStoiBands; ++j) {
    const double cf = 150.0 * std::pow(2.0, j / 3.0);
    const double f_lo = cf / std::pow(2.0, 1.0 / 6.0);
    const double f_hi = cf * std::pow(2.0, 1.0 / 6.0);
    const double hz_per_bin = static_cast<double>(kStoiRate) / kStoiFft;
    const int k_lo = static_cast<int>(std::ceil(f_lo / hz_per_bin));
    const int k_hi = std::min(static_cast<int>(kStoiFft) / 2 + 1,
                              static_cast<int>(std::ceil(f_hi / hz_per_bin)));
    band_bins[j] = {k_lo, k_hi};
  }

  const std::vector<std::vector<double>> xb =
      stoi_band_mags(x, kept, window, band_bins);
  const std::vector<std::vector<double>> yb =
      stoi_band_mags(y, kept, window, band_bins);

  // Normalized estimate is clipped at the -15 dB SDR lower bound: the
  // factor is 1 + 10^(-beta/20) with beta = -15, i.e. the estimate may
  // exceed the reference by at most ~16 dB before it stops counting.
  const double clip = 1.0 + std::pow(10.0, 15.0 / 20.0);
  const std::size_t total = kept.size();
  double acc = 0.0;
  std::size_t count = 0;
  std::vector<double> seg_x(kStoiSegment), seg_y(kStoiSegment);
  for (std::size_t m = kStoiSegment; m <= total; ++m) {
    for (int j = 0; j < kStoiBands; ++j) {
      double ex = 0.0, ey = 0.0;
      for (int i = 0; i < kStoiSegment; ++i) {
        seg_x[i] = xb[j][m - kStoiSegment + i];
        seg_y[i] = yb[j][m - kStoiSegment + i];
        ex += seg_x[i] * seg_x[i];
        ey += seg_y[i] * seg_y[i];
      }
      const double alpha = ey > 0.0 ? std::sqrt(ex / ey) : 0.0;
      double mx = 0.0, my = 0.0;
      for (int i = 0; i < kStoiSegment; ++i) {
        seg_y[i] = std::min(alpha * seg_y[i], clip * seg_x[i]);
        mx += seg_x[i];
        my += seg_y[i];
      }
      mx /= kStoiSegment;
      my /= kStoiSegment;
      double num = 0.0, dx = 0.0, dy = 0.0;
      for (int i = 0; i < kStoiSegment; ++i) {
        num += (seg_x[i] - mx) * (seg_y[i] - my);
        dx += (seg_x[i] - mx) * (seg_x[i] - mx);
        dy += (seg_y[i] - my) * (seg_y[i] - my);
      }
      const double denom = std::sqrt(dx * dy);
      acc += denom > 0.0 ? num / denom : 0.0;
      ++count;
    }
  }
  return acc / static_cast<double>(count);
}

// ---------------------------------------------------------------------------
// SRMR
// ---------------------------------------------------------------------------

namespace {

constexpr int kSrmrChannels = 23;
constexpr double kGammatoneLenS = 0.128;
constexpr int kModBands = 8;

double erb_scale(double f_hz) {
  return 21.4 * std::log10(1.0 + 0.00437 * f_hz);
}

double erb_scale_inv(double e) {
  return (std::pow(10.0, e / 21.4) - 1.0) / 0.00437;
}

std::vector<double> gammatone_fir(double cf_hz, double rate_hz) {
  const int len = static_cast<int>(std::lround(kGammatoneLenS * rate_hz));
  const double bw = 1.019 * 24.7 * (4.37 * cf_hz / 1000.0 + 1.0);
  std::vector<double> g(len);
  double energy = 0.0;
  for (int k = 0; k < len; ++k) {
    const double t = k / rate_hz;
    g[k] = t * t * t * std::exp(-2.0 * M_PI * bw * t) *
           std::cos(2.0 * M_PI * cf_hz * t);
    energy += g[k] * g[k];
  }
  const double scale = 1.0 / std::sqrt(energy);
  for (double& v : g) v *= scale;
  return g;
}

}  // namespace

double srmr(const Waveform& estimate) {
  validate(estimate);
  const std::size_t len = estimate.samples.size();
  if (len == 0) throw std::invalid_argument("srmr: zero-length data");
  if (energy(estimate) <= 0.0)
    throw std::invalid_argument("srmr: silent/degenerate input");

  const double fs = estimate.sample_rate_hz;
  const int gt_len = static_cast<int>(std::lround(kGammatoneLenS * fs));
  const std::size_t full = len + gt_len - 1;
  const std::size_t nfft = next_pow2(full);

  // Modulation band edges: centers 4..128 Hz, geometric mid-points between
  // neighbours, the outer edges extended by the same half-step ratio.
  double centers[kModBands];
  for (int j = 0; j < kModBands; ++j)
    centers[j] = 4.0 * std::pow(2.0, 5.0 * j / 7.0);
  const double half_step = std::pow(2.0, 5.0 / 14.0);
  double edges[kModBands + 1];
  edges[0] = centers[0] / half_step;
  for (int j = 1; j < kModBands; ++j)
    edges[j] = std::sqrt(centers[j - 1] * centers[j]);
  edges[kModBands] = centers[kModBands - 1] * half_step;

  const double e_lo = erb_scale(125.0);
  const double e_hi = erb_scale(fs / 4.0);

  const std::vector<std::complex<double>> xspec =
      rfft(estimate.samples, nfft);

  double band_energy[kModBands] = {0.0};
  std::vector<std::complex<double>> work(nfft);
  for (int c = 0; c < kSrmrChannels; ++c) {
    const double cf =
        erb_scale_inv(e_lo + (e_hi - e_lo) * c / (kSrmrChannels - 1));
    const std::vector<std::complex<double>> gspec =
        rfft(gammatone_fir(cf, fs), nfft);

    // Analytic signal of the channel output straight from the one-sided
    // product: double the interior bins, zero the negative half, one inverse
    // transform.
    std::fill(work.begin(), work.end(), std::complex<double>(0.0, 0.0));
    work[0] = xspec[0] * gspec[0];
    for (std::size_t i = 1; i < nfft / 2; ++i)
      work[i] = 2.0 * xspec[i] * gspec[i];
    work[nfft / 2] = xspec[nfft / 2] * gspec[nfft / 2];
    fft(&work, /*inverse=*/true);

    std::vector<double> env(nfft, 0.0);
    double mean = 0.0;
    for (std::size_t i = 0; i < full; ++i) {
      env[i] = std::abs(work[i]);
      mean += env[i];
    }
    mean /= static_cast<double>(full);
    // Mean removal plus a Hann taper: the voiced-beat line at f0 sits just
    // above the top modulation band, and untapered leakage from it would
    // swamp the (genuinely tiny) high-rate bands of a clean signal.
    for (std::size_t i = 0; i < full; ++i) {
      const double w =
          0.5 * (1.0 - std::cos(2.0 * M_PI * i / (full - 1)));
      env[i] = (env[i] - mean) * w;
    }

    const std::vector<std::complex<double>> espec = rfft(env, nfft);
    const double hz_per_bin = fs / static_cast<double>(nfft);
    for (std::size_t i = 1; i < espec.size(); ++i) {
      const double f = i * hz_per_bin;
      if (f < edges[0]) continue;
      if (f >= edges[kModBands]) break;
      int j = 0;
      while (f >= edges[j + 1]) ++j;
      band_energy[j] += std::norm(espec[i]);
    }
  }

  double low = 0.0, high = 0.0;
  for (int j = 0; j < 4; ++j) low += band_energy[j];
  for (int j = 4; j < kModBands; ++j) high += band_energy[j];
  if (low <= 0.0 || high <= 0.0)
    throw std::invalid_argument("srmr: silent/degenerate input");
  return 10.0 * std::log10(low / high);
}

// ---------------------------------------------------------------------------
// Cepstral distance
// ---------------------------------------------------------------------------

namespace {

constexpr int kCepstralOrder = 24;
constexpr double kCepstralGateDb = 40.0;
constexpr double kLogMagFloor = 1e-10;

// Real cepstrum coefficients 1..kCepstralOrder for one spectral frame.
void frame_cepstrum(const Grid<std::complex<double>>& spec, std::size_t frame,
                    std::size_t nfft, std::vector<double>* out) {
  const std::size_t bins = spec.bins();
  std::vector<std::complex<double>> logmag(bins);
  for (std::size_t k = 0; k < bins; ++k)
    logmag[k] = std::log(std::max(std::abs(spec.at(k, frame)), kLogMagFloor));
  const std::vector<double> ceps = irfft(logmag, nfft);
  out->assign(ceps.begin() + 1, ceps.begin() + 1 + kCepstralOrder);
}

}  // namespace

double cepstral_distance(const Waveform& reference, const Waveform& estimate) {
  if (reference.sample_rate_hz != estimate.sample_rate_hz)
    throw std::invalid_argument("cepstral_distance: sample rate mismatch");
  if (reference.samples.size() != estimate.samples.size())
    throw std::invalid_argument("cepstral_distance: length mismatch");
  if (reference.samples.empty())
    throw std::invalid_argument("cepstral_distance: zero-length data");

  const StftConfig cfg;
  const Spectrogram ref_spec = stft(reference, cfg);
  const Spectrogram est_spec = stft(estimate, cfg);
  const std::size_t frames = ref_spec.frames();
  const std::size_t bins = ref_spec.bins();

  // Gate on the louder of the two frames so the metric stays symmetric.
  std::vector<double> gate_db(frames);
  double max_db = -1e300;
  for (std::size_t m = 0; m < frames; ++m) {
    double er = 0.0, ee = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      er += std::norm(ref_spec.data.at(k, m));
      ee += std::norm(est_spec.data.at(k, m));
    }
    gate_db[m] = 10.0 * std::log10(std::max(std::max(er, ee), 1e-300));
    max_db = std::max(max_db, gate_db[m]);
  }

  const double to_db = 10.0 / std::log(10.0);
  std::vector<double> cr, ce;
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t m = 0; m < frames; ++m) {
    if (gate_db[m] <= max_db - kCepstralGateDb) continue;
    frame_cepstrum(ref_spec.data, m, cfg.frame_len, &cr);
    frame_cepstrum(est_spec.data, m, cfg.frame_len, &ce);
    double sq = 0.0;
    for (int q = 0; q < kCepstralOrder; ++q)
      sq += (cr[q] - ce[q]) * (cr[q] - ce[q]);
    acc += to_db * std::sqrt(2.0 * sq);
    ++count;
  }
  if (count == 0)
    throw std::invalid_argument(
        "cepstral_distance: degenerate input (all frames below energy gate)");
  return acc / static_cast<double>(count);
}

MetricsReport evaluate(const Waveform& reference, const Waveform& estimate) {
  MetricsReport report;
  // SRMR is reference-free and deliberately sees the raw estimate.
  report.srmr_db = srmr(estimate);
  const auto [ref, est] = align_and_trim(reference, estimate);
  report.sdr_db = si_sdr(ref, est);
  report.stoi = std::clamp(stoi(ref, est), 0.0, 1.0);
  report.cd = cepstral_distance(ref, est);
  return report;
}

}  // namespace binderev
