// core/src/masking.cc

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

#include "binderev/masking.h"

#include <cmath>
#include <stdexcept>

#include "binderev/fft.h"

namespace binderev {

namespace {

double wrap_to_pi(double x) {
  x = std::fmod(x + std::numbers::pi, 2.0 * std::numbers::pi);
  if (x <= 0.0) x += 2.0 * std::numbers::pi;
  return x - std::numbers::pi;
}

}  // namespace

MaskPair make_mask_pair(SoftMask direct) {
  MaskPair pair;
  pair.reverb = Grid<double>(direct.bins(), direct.frames());
  for (std::size_t i = 0; i < direct.size(); ++i) {
    double v = direct.data()[i];
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("mask: entry outside [0, 1]");
    pair.reverb.data()[i] = 1.0 - v;
  }
  pair.direct = std::move(direct);
  return pair;
}

BandPlan make_band_plan(std::size_t frame_len, int sample_rate_hz) {
  if (frame_len == 0 || frame_len % 2 != 0)
    throw std::invalid_argument("band plan: frame_len must be even");
  if (sample_rate_hz <= 0)
    throw std::invalid_argument("band plan: sample rate must be positive");
  BandPlan plan;
  plan.frame_len = frame_len;
  plan.sample_rate_hz = sample_rate_hz;
  plan.nyquist_bin = frame_len / 2;
  // Largest bin whose center frequency does not exceed the band edge.
  auto edge_bin = [&](double freq_hz) {
    return static_cast<std::size_t>(
        std::floor(freq_hz * frame_len / sample_rate_hz + 1e-9));
  };
  plan.low_hi_bin = edge_bin(1500.0);
  plan.mid_hi_bin = edge_bin(4000.0);
  if (plan.low_hi_bin >= plan.mid_hi_bin || plan.mid_hi_bin >= plan.nyquist_bin)
    throw std::invalid_argument("band plan: degenerate band split");
  return plan;
}

CueTemplates build_templates(const Rir& anechoic_1, const Rir& anechoic_2,
                             const StftConfig& cfg, double azimuth_deg) {
  validate(cfg);
  if (anechoic_1.sample_rate_hz != anechoic_2.sample_rate_hz)
    throw std::invalid_argument("build_templates: RIR rate mismatch");
  if (anechoic_1.taps.size() > cfg.frame_len ||
      anechoic_2.taps.size() > cfg.frame_len)
    throw std::invalid_argument(
        "build_templates: direct-path RIR longer than one frame");

  const auto hl = rfft(anechoic_1.taps, cfg.frame_len);
  const auto hr = rfft(anechoic_2.taps, cfg.frame_len);

  CueTemplates t;
  t.azimuth_deg = azimuth_deg;
  t.ild_template_db.resize(hl.size());
  t.ipd_template_rad.resize(hl.size());
  for (std::size_t k = 0; k < hl.size(); ++k) {
    const double ml = std::max(std::abs(hl[k]), kCueEpsilon);
    const double mr = std::max(std::abs(hr[k]), kCueEpsilon);
    t.ild_template_db[k] = 20.0 * std::log10(ml / mr);
    double ipd = std::arg(hl[k] * std::conj(hr[k]));
    if (ipd <= -std::numbers::pi) ipd += 2.0 * std::numbers::pi;
    t.ipd_template_rad[k] = ipd;
  }
  return t;
}

BackendMasks oracle_irm_backend(const Spectrogram& mix_left,
                                const Spectrogram& mix_right,
                                const Spectrogram& direct_left,
                                const Spectrogram& direct_right,
                                double epsilon) {
  check_same_shape(mix_left.data, mix_right.data, "oracle_irm_backend");
  check_same_shape(mix_left.data, direct_left.data, "oracle_irm_backend");
  check_same_shape(mix_left.data, direct_right.data, "oracle_irm_backend");

  SoftMask direct(mix_left.bins(), mix_left.frames());
  for (std::size_t i = 0; i < direct.size(); ++i) {
    const double d = 0.5 * (std::abs(direct_left.data.data()[i]) +
                            std::abs(direct_right.data.data()[i]));
    const double x = 0.5 * (std::abs(mix_left.data.data()[i]) +
                            std::abs(mix_right.data.data()[i]));
    direct.data()[i] = d / (d + std::abs(x - d) + epsilon);
  }

  BackendMasks out;
  out.ipd = make_mask_pair(direct);
  out.ild = make_mask_pair(std::move(direct));
  return out;
}

BackendMasks cue_template_backend(const CueGrid& cues,
                                  const CueTemplates& templates) {
  if (cues.bins() != templates.ild_template_db.size() ||
      cues.bins() != templates.ipd_template_rad.size())
    throw std::invalid_argument("cue_template_backend: template length mismatch");
  if (!(templates.sigma_ild_db > 0.0) || !(templates.sigma_ipd_rad > 0.0))
    throw std::invalid_argument("cue_template_backend: sigmas must be positive");

  const double inv_2s_ipd =
      1.0 / (2.0 * templates.sigma_ipd_rad * templates.sigma_ipd_rad);
  const double inv_2s_ild =
      1.0 / (2.0 * templates.sigma_ild_db * templates.sigma_ild_db);

  SoftMask ipd_direct(cues.bins(), cues.frames());
  SoftMask ild_direct(cues.bins(), cues.frames());
  for (std::size_t k = 0; k < cues.bins(); ++k) {
    const double tmpl_ipd = templates.ipd_template_rad[k];
    const double tmpl_ild = templates.ild_template_db[k];
    for (std::size_t m = 0; m < cues.frames(); ++m) {
      const double d_ipd = wrap_to_pi(cues.ipd_rad.at(k, m) - tmpl_ipd);
      ipd_direct.at(k, m) = std::exp(-d_ipd * d_ipd * inv_2s_ipd);
      const double d_ild = cues.ild_db.at(k, m) - tmpl_ild;
      ild_direct.at(k, m) = std::exp(-d_ild * d_ild * inv_2s_ild);
    }
  }

  BackendMasks out;
  out.ipd = make_mask_pair(std::move(ipd_direct));
  out.ild = make_mask_pair(std::move(ild_direct));
  return out;
}

SoftMask fuse_subband(const SoftMask& ipd_direct, const SoftMask& ild_direct,
                      const BandPlan& plan) {
  check_same_shape(ipd_direct, ild_direct, "fuse_subband");
  if (ipd_direct.bins() != plan.nyquist_bin + 1)
    throw std::invalid_argument("fuse_subband: plan does not match mask bins");

  SoftMask fused(ipd_direct.bins(), ipd_direct.frames());
  for (std::size_t k = 0; k < fused.bins(); ++k) {
    const BandPlan::Band band = plan.band_of(k);
    for (std::size_t m = 0; m < fused.frames(); ++m) {
      switch (band) {
        case BandPlan::Band::kLow:
          fused.at(k, m) = ipd_direct.at(k, m);
          break;
        case BandPlan::Band::kMid:
          fused.at(k, m) = ipd_direct.at(k, m) * ild_direct.at(k, m);
          break;
        case BandPlan::Band::kHigh:
          fused.at(k, m) = ild_direct.at(k, m);
          break;
      }
    }
  }
  return fused;
}

Waveform apply_and_reconstruct(const SoftMask& mask, const Spectrogram& x1,
                               const Spectrogram& x2, Downmix downmix) {
  check_same_shape(x1.data, x2.data, "apply_and_reconstruct");
  if (mask.bins() != x1.data.bins() || mask.frames() != x1.data.frames())
    throw std::invalid_argument("apply_and_reconstruct: mask shape mismatch");
  if (x1.sample_rate_hz != x2.sample_rate_hz ||
      x1.original_len != x2.original_len)
    throw std::invalid_argument("apply_and_reconstruct: spectrogram mismatch");

  Spectrogram sum = x1;
  const double gain = (downmix == Downmix::kAverage) ? 0.5 : 1.0;
  for (std::size_t i = 0; i < sum.data.size(); ++i)
    sum.data.data()[i] = gain * mask.data()[i] *
                         (x1.data.data()[i] + x2.data.data()[i]);
  return istft(sum);
}

}  // namespace binderev
