// core/src/signal_gen.cc

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

#include "binderev/signal_gen.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "binderev/rng.h"

namespace binderev {

namespace {

constexpr double kTwoPi = 6.283185307179586;

// f0 range keeps the strongest envelope beat (at f0 itself) above the
// modulation bands that the reverberation metrics integrate, even after the
// maximum downward drift.
constexpr double kF0LoHz = 185.0;
constexpr double kF0HiHz = 260.0;
constexpr double kDriftMaxHzPerS = 30.0;
constexpr double kMaxHarmonicHz = 7600.0;

struct Formant {
  double lo_hz, hi_hz, bw_hz, gain;
};

constexpr Formant kFormants[3] = {
    {350.0, 900.0, 150.0, 1.0},
    {1100.0, 2500.0, 250.0, 0.7},
    {3500.0, 6500.0, 900.0, 0.45},
};

// One phrase: continuous voicing through a chain of phones.  Formant targets
// and per-formant gains jump at each phone boundary and are reached through
// short coarticulation ramps, so every frequency band swings hard at the
// phone rate while the broadband envelope stays nearly steady - the
// band-level dynamics that separate a dry signal from a smeared one.
void append_phrase(Rng* rng, double rate, std::vector<double>* out) {
  const double phrase_dur = rng->uniform(0.8, 1.5);
  const double f0_start = rng->uniform(kF0LoHz, kF0HiHz);
  const double drift = rng->uniform(-kDriftMaxHzPerS, kDriftMaxHzPerS);

  // Phone schedule across the phrase.
  struct Phone {
    double t0, t1;
    double c[3];  // formant targets
    double g[3];  // per-formant gains
  };
  std::vector<Phone> phones;
  double t = 0.0;
  while (t < phrase_dur) {
    Phone p;
    p.t0 = t;
    p.t1 = std::min(phrase_dur, t + rng->uniform(0.08, 0.20));
    for (int r = 0; r < 3; ++r) {
      p.c[r] = rng->uniform(kFormants[r].lo_hz, kFormants[r].hi_hz);
      // Log-uniform gain over ~20 dB, drawn independently per formant.  A
      // shared phone loudness would move every band together and the band
      // correlations a smearing tail must break would survive it; with
      // independent gains each frequency region carries its own fast
      // loud/quiet pattern, and the quiet phones of one band sit inside
      // the 15-20 dB window where a tail from its loud neighbours does
      // real damage instead of being clipped away as fill-in.
      p.g[r] = std::exp(rng->uniform(std::log(0.10), 0.0));
    }
    phones.push_back(p);
    t = p.t1;
  }

  const double f0_max = std::max(f0_start, f0_start + drift * phrase_dur);
  const int num_harmonics =
      std::max(1, static_cast<int>(kMaxHarmonicHz / f0_max));
  std::vector<double> harm_phase(num_harmonics);
  for (int h = 0; h < num_harmonics; ++h)
    harm_phase[h] = rng->uniform(0.0, kTwoPi);


  constexpr double kRampS = 0.025;  // coarticulation time constant
  constexpr double kAttackS = 0.040, kReleaseS = 0.060;

  const int n = static_cast<int>(std::lround(phrase_dur * rate));
  std::vector<double> seg(n);
  std::size_t pi = 0;
  double peak = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ti = i / rate;
    while (pi + 1 < phones.size() && ti >= phones[pi].t1) ++pi;
    const Phone& cur = phones[pi];
    const Phone& prev = phones[pi > 0 ? pi - 1 : 0];
    // Ramp from the previous phone's targets over the first kRampS.
    const double u = std::min(1.0, (ti - cur.t0) / kRampS);
    double c_now[3], g_now[3];
    for (int r = 0; r < 3; ++r) {
      c_now[r] = prev.c[r] + (cur.c[r] - prev.c[r]) * u;
      g_now[r] = prev.g[r] + (cur.g[r] - prev.g[r]) * u;
    }

    const double cycles = f0_start * ti + 0.5 * drift * ti * ti;
    const double f0_now = f0_start + drift * ti;
    double s = 0.0;
    for (int h = 0; h < num_harmonics; ++h) {
      const double f = (h + 1) * f0_now;
      double shape = 0.02;  // floor keeps inter-formant harmonics alive
      for (int r = 0; r < 3; ++r) {
        const double d = (f - c_now[r]) / kFormants[r].bw_hz;
        shape += kFormants[r].gain * g_now[r] * std::exp(-0.5 * d * d);
      }
      s += shape / (h + 1) *
           std::sin(harm_phase[h] + kTwoPi * (h + 1) * cycles);
    }
    double env = 1.0;
    if (ti < kAttackS)
      env *= 0.5 * (1.0 - std::cos(M_PI * ti / kAttackS));
    else if (ti > phrase_dur - kReleaseS)
      env *= 0.5 * (1.0 - std::cos(M_PI * (phrase_dur - ti) / kReleaseS));
    seg[i] = env * s;
    peak = std::max(peak, std::abs(seg[i]));
  }
  if (peak > 0.0) {
    const double g = rng->uniform(0.7, 1.0) / peak;
    for (double& v : seg) v *= g;
  }
  out->insert(out->end(), seg.begin(), seg.end());
}

}  // namespace

Waveform make_utterance(std::uint64_t seed, double duration_s,
                        double sample_rate_hz) {
  if (!(duration_s > 0.0) || !(sample_rate_hz > 0.0))
    throw std::invalid_argument("make_utterance: non-positive duration or rate");
  const std::size_t total =
      static_cast<std::size_t>(std::lround(duration_s * sample_rate_hz));
  if (total == 0)
    throw std::invalid_argument("make_utterance: non-positive duration or rate");

  Rng rng(seed);
  std::vector<double> buf;
  buf.reserve(total + static_cast<std::size_t>(2.0 * sample_rate_hz));
  while (buf.size() < total) {
    append_phrase(&rng, sample_rate_hz, &buf);
    const int gap = static_cast<int>(
        std::lround(rng.uniform(0.12, 0.25) * sample_rate_hz));
    buf.insert(buf.end(), gap, 0.0);
  }
  buf.resize(total);

  Waveform out;
  out.sample_rate_hz = static_cast<int>(std::lround(sample_rate_hz));
  out.samples = std::move(buf);
  return normalize(out);
}

Waveform make_noise(std::uint64_t seed, double duration_s,
                    double sample_rate_hz) {
  if (!(duration_s > 0.0) || !(sample_rate_hz > 0.0))
    throw std::invalid_argument("make_noise: non-positive duration or rate");
  const std::size_t total =
      static_cast<std::size_t>(std::lround(duration_s * sample_rate_hz));
  if (total == 0)
    throw std::invalid_argument("make_noise: non-positive duration or rate");

  Rng rng(seed);
  Waveform out;
  out.sample_rate_hz = static_cast<int>(std::lround(sample_rate_hz));
  out.samples.resize(total);
  for (double& v : out.samples) v = rng.gaussian();
  return normalize(out);
}

}  // namespace binderev
