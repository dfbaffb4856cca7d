// core/src/roomsim.cc

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

#include "binderev/roomsim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "binderev/wav_io.h"

namespace binderev {

namespace {

constexpr double kSabine = 0.161;        // RT60 = 0.161 V / (S alpha)
constexpr int kMaxOrderCap = 40;
constexpr int kSincHalfTaps = 8;         // 16-tap interpolator
constexpr double kTailResidual = 1e-6;   // -60 dB energy truncation

double sub(const Vec3& a, const Vec3& b, int axis) {
  switch (axis) {
    case 0: return a.x - b.x;
    case 1: return a.y - b.y;
    default: return a.z - b.z;
  }
}

bool strictly_inside(const Vec3& p, const Vec3& dims) {
  return p.x > 0.0 && p.x < dims.x && p.y > 0.0 && p.y < dims.y && p.z > 0.0 &&
         p.z < dims.z;
}

// One virtual source: mirrored position and the number of wall hits its
// path re-traces.
struct Image {
  Vec3 pos;
  int order;
};

// Allen-Berkley image set.  Per axis the mirrored coordinate is
// (1 - 2p) s + 2 m L with p in {0,1}, and the reflection count is
// |m - p| + |m|; total order is the sum over axes.  Enumeration order is
// fixed so tap accumulation is bit-reproducible.
std::vector<Image> enumerate_images(const RoomSpec& room, const Vec3& source,
                                    int max_order) {
  const int m_span = max_order / 2 + 1;
  std::vector<Image> images;
  const double s[3] = {source.x, source.y, source.z};
  const double L[3] = {room.dims.x, room.dims.y, room.dims.z};
  for (int px = 0; px <= 1; ++px)
    for (int mx = -m_span; mx <= m_span; ++mx) {
      const int nx = std::abs(mx - px) + std::abs(mx);
      if (nx > max_order) continue;
      for (int py = 0; py <= 1; ++py)
        for (int my = -m_span; my <= m_span; ++my) {
          const int ny = std::abs(my - py) + std::abs(my);
          if (nx + ny > max_order) continue;
          for (int pz = 0; pz <= 1; ++pz)
            for (int mz = -m_span; mz <= m_span; ++mz) {
              const int nz = std::abs(mz - pz) + std::abs(mz);
              const int order = nx + ny + nz;
              if (order > max_order) continue;
              Image img;
              img.pos.x = (1 - 2 * px) * s[0] + 2 * mx * L[0];
              img.pos.y = (1 - 2 * py) * s[1] + 2 * my * L[1];
              img.pos.z = (1 - 2 * pz) * s[2] + 2 * mz * L[2];
              img.order = order;
              images.push_back(img);
            }
        }
    }
  return images;
}

// First-order spherical head shadow (one pole, one zero):
//   H(s) = (alpha(theta) s + beta) / (s + beta),   beta = 2 c / a,
//   alpha(theta) = 1.05 + 0.95 cos(theta * 180 / 150),
// bilinear-discretized; a is the head radius (half the mic spacing), theta
// the angle between the ear axis and the arrival direction.  DC gain is 1,
// high-frequency gain is alpha: ~2 facing the source, ~0.1 in full shadow.
struct ShadowCoeffs {
  double b0, b1, a1;
};

ShadowCoeffs head_shadow(double cos_theta, double fs, double speed_of_sound) {
  const double head_radius = ArrayGeometry::kMicSpacingM / 2.0;
  const double beta = 2.0 * speed_of_sound / head_radius;
  const double theta_deg = std::acos(std::clamp(cos_theta, -1.0, 1.0)) *
                           180.0 / std::numbers::pi;
  const double alpha =
      1.05 + 0.95 * std::cos(theta_deg / 150.0 * std::numbers::pi);
  const double two_fs = 2.0 * fs;
  ShadowCoeffs c;
  c.b0 = (two_fs * alpha + beta) / (two_fs + beta);
  c.b1 = (beta - two_fs * alpha) / (two_fs + beta);
  c.a1 = (beta - two_fs) / (two_fs + beta);
  return c;
}

// Accumulates one image arrival: windowed-sinc stencil at the fractional
// delay, optionally smeared through the head-shadow one-pole recursion.
void add_arrival(std::vector<double>* taps, double delay_samples,
                 double amplitude, const ShadowCoeffs* shadow) {
  const int i0 = static_cast<int>(std::floor(delay_samples));
  const double frac = delay_samples - i0;

  double stencil[2 * kSincHalfTaps];
  for (int k = -kSincHalfTaps + 1; k <= kSincHalfTaps; ++k) {
    const double u = k - frac;
    double sinc = 1.0;
    if (std::abs(u) > 1e-12)
      sinc = std::sin(std::numbers::pi * u) / (std::numbers::pi * u);
    const double hann =
        0.5 * (1.0 + std::cos(std::numbers::pi * u / kSincHalfTaps));
    stencil[k + kSincHalfTaps - 1] = amplitude * sinc * std::max(hann, 0.0);
  }

  const int base = i0 - kSincHalfTaps + 1;
  if (shadow == nullptr) {
    for (int k = 0; k < 2 * kSincHalfTaps; ++k) {
      const int idx = base + k;
      if (idx >= 0 && idx < static_cast<int>(taps->size()))
        (*taps)[idx] += stencil[k];
    }
    return;
  }

  // y[n] = b0 x[n] + b1 x[n-1] - a1 y[n-1], run until the pole's tail is
  // below 1e-9 of its start.
  const int ring = std::max(
      1, static_cast<int>(std::ceil(std::log(1e-9) /
                                    std::log(std::abs(shadow->a1)))));
  double y_prev = 0.0, x_prev = 0.0;
  for (int k = 0; k < 2 * kSincHalfTaps + ring; ++k) {
    const double x = (k < 2 * kSincHalfTaps) ? stencil[k] : 0.0;
    const double y = shadow->b0 * x + shadow->b1 * x_prev - shadow->a1 * y_prev;
    const int idx = base + k;
    if (idx >= 0 && idx < static_cast<int>(taps->size())) (*taps)[idx] += y;
    x_prev = x;
    y_prev = y;
  }
}

void truncate_tail(std::vector<double>* taps) {
  double total = 0.0;
  for (double t : *taps) total += t * t;
  if (total <= 0.0) return;
  double suffix = 0.0;
  std::size_t keep = taps->size();
  for (std::size_t i = taps->size(); i-- > 0;) {
    suffix += (*taps)[i] * (*taps)[i];
    if (suffix >= kTailResidual * total) {
      keep = i + 1;
      break;
    }
  }
  taps->resize(std::max<std::size_t>(keep, 1));
}

struct Receiver {
  Vec3 pos;
  Vec3 ear_axis;  // unit vector from head center to this ear; shadow only
  Rir::Channel channel;
};

Rir render_receiver(const RoomSpec& room, const std::vector<Image>& images,
                    double beta, const Receiver& rx, bool spherical) {
  const double fs = room.sample_rate_hz;
  const double c = room.speed_of_sound;

  double max_delay = 0.0;
  for (const auto& img : images) {
    const double dx = sub(img.pos, rx.pos, 0);
    const double dy = sub(img.pos, rx.pos, 1);
    const double dz = sub(img.pos, rx.pos, 2);
    max_delay =
        std::max(max_delay, std::sqrt(dx * dx + dy * dy + dz * dz) / c * fs);
  }

  Rir rir;
  rir.sample_rate_hz = room.sample_rate_hz;
  rir.channel = rx.channel;
  rir.taps.assign(static_cast<std::size_t>(std::ceil(max_delay)) +
                      2 * kSincHalfTaps + 64,
                  0.0);

  for (const auto& img : images) {
    const double dx = sub(img.pos, rx.pos, 0);
    const double dy = sub(img.pos, rx.pos, 1);
    const double dz = sub(img.pos, rx.pos, 2);
    const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (r < 1e-9)
      throw std::invalid_argument("image_source_rir: source coincides with mic");
    const double delay = r / c * fs;
    const double amp = std::pow(beta, img.order) / r;
    if (img.order == 0)
      rir.direct_index = static_cast<std::ptrdiff_t>(std::lround(delay));
    if (spherical) {
      const double cos_theta = (dx * rx.ear_axis.x + dy * rx.ear_axis.y +
                                dz * rx.ear_axis.z) /
                               r;
      const ShadowCoeffs coeffs =
          head_shadow(cos_theta, fs, room.speed_of_sound);
      add_arrival(&rir.taps, delay, amp, &coeffs);
    } else {
      add_arrival(&rir.taps, delay, amp, nullptr);
    }
  }

  truncate_tail(&rir.taps);
  return rir;
}

int resolve_max_order(const RoomSpec& room, double beta) {
  if (room.max_order.has_value()) return *room.max_order;
  return default_max_order(beta);
}

// A uniform-coefficient image model decays slower than the Eyring time the
// coefficient was solved from: axial image chains hit fewer walls per metre
// than the diffuse-field average, and at shoebox aspect ratios the measured
// RT60 comes out tens of percent long.  The render path therefore nudges
// beta until the Schroeder time of a fixed mono probe matches the room's
// target.  Probe positions are fixed fractions of the room (off the symmetry
// planes) so the result is deterministic and cacheable.  Note the probe
// always runs at the automatic order for the current beta - the correction
// must not depend on a caller's explicit max_order, or energy would no
// longer be monotone in the order.
double probe_rt60(const RoomSpec& room, double beta) {
  const Vec3 src{0.31 * room.dims.x, 0.42 * room.dims.y, 0.57 * room.dims.z};
  const Vec3 mic{0.69 * room.dims.x, 0.55 * room.dims.y, 0.46 * room.dims.z};
  const auto images = enumerate_images(room, src, default_max_order(beta));
  Receiver rx{mic, {0.0, 0.0, 0.0}, Rir::Channel::kMono};
  return schroeder_rt60(render_receiver(room, images, beta, rx, false));
}

double calibrated_beta(const RoomSpec& room, double beta0) {
  if (beta0 <= 0.0 || default_max_order(beta0) == 0) return beta0;

  char key[256];
  std::snprintf(key, sizeof(key), "%.17g,%.17g,%.17g,%.17g,%d,%.17g",
                room.dims.x, room.dims.y, room.dims.z, room.rt60_s,
                room.sample_rate_hz, room.speed_of_sound);
  static std::mutex cache_mutex;
  static std::map<std::string, double> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  double beta = beta0;
  for (int pass = 0; pass < 4; ++pass) {
    double measured;
    try {
      measured = probe_rt60(room, beta);
    } catch (const std::exception&) {
      break;  // not enough decay to measure; keep the current estimate
    }
    if (std::abs(measured / room.rt60_s - 1.0) < 0.02) break;
    // Decay time scales as -1/ln(beta) at fixed geometry, so rescale ln(beta)
    // by the measured-over-target ratio.
    beta = std::exp(std::log(beta) * measured / room.rt60_s);
    beta = std::min(beta, 0.9999);
  }

  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(key, beta);
  return beta;
}

}  // namespace

void validate(const RoomSpec& room) {
  if (!(room.dims.x > 0.0) || !(room.dims.y > 0.0) || !(room.dims.z > 0.0))
    throw std::invalid_argument("room: dimensions must be positive");
  if (room.rt60_s < 0.0)
    throw std::invalid_argument("room: rt60_s must be nonnegative");
  if (room.sample_rate_hz <= 0)
    throw std::invalid_argument("room: sample rate must be positive");
  if (room.max_order.has_value() &&
      (*room.max_order < 0 || *room.max_order > kMaxOrderCap))
    throw std::invalid_argument("room: max_order out of [0, 40]");
  if (!(room.speed_of_sound > 0.0))
    throw std::invalid_argument("room: speed of sound must be positive");
}

Vec3 ArrayGeometry::source_pos() const {
  const double az = source_azimuth_deg * std::numbers::pi / 180.0;
  // Facing +x; positive azimuth swings toward the right mic at -y.
  return {array_center.x + source_distance_m * std::cos(az),
          array_center.y - source_distance_m * std::sin(az), array_center.z};
}

void validate(const ArrayGeometry& geom, const RoomSpec& room) {
  validate(room);
  const double az = geom.source_azimuth_deg;
  bool on_grid = false;
  for (int step = 0; step <= 6; ++step)
    if (std::abs(az - 15.0 * step) < 1e-9) on_grid = true;
  if (!on_grid)
    throw std::invalid_argument(
        "geometry: azimuth must be one of {0,15,30,45,60,75,90} degrees");
  if (std::abs(geom.source_distance_m - 1.0) > 1e-9 &&
      std::abs(geom.source_distance_m - 1.5) > 1e-9)
    throw std::invalid_argument("geometry: distance must be 1.0 or 1.5 m");
  if (!strictly_inside(geom.mic_left(), room.dims) ||
      !strictly_inside(geom.mic_right(), room.dims))
    throw std::invalid_argument("geometry: microphones outside the room");
  if (!strictly_inside(geom.source_pos(), room.dims))
    throw std::invalid_argument("geometry: source outside the room");
}

double reflection_coeff_from_rt60(const RoomSpec& room) {
  validate(room);
  if (room.rt60_s == 0.0) return 0.0;
  const double V = room.dims.x * room.dims.y * room.dims.z;
  const double S = 2.0 * (room.dims.x * room.dims.y +
                          room.dims.x * room.dims.z +
                          room.dims.y * room.dims.z);
  const double sabine_alpha = kSabine * V / (S * room.rt60_s);
  if (sabine_alpha >= 1.0)
    throw std::runtime_error(
        "reflection_coeff_from_rt60: rt60 infeasible for this geometry "
        "(required absorption alpha >= 1)");
  const double alpha = 1.0 - std::exp(-sabine_alpha);
  return std::sqrt(1.0 - alpha);
}

int default_max_order(double beta) {
  if (beta <= 0.0) return 0;
  if (beta >= 1.0) return kMaxOrderCap;
  const int order =
      static_cast<int>(std::ceil(std::log(1e-3) / std::log(beta)));
  return std::clamp(order, 0, kMaxOrderCap);
}

std::size_t image_count(int max_order) {
  if (max_order < 0)
    throw std::invalid_argument("image_count: negative order");
  RoomSpec unit;
  unit.dims = {1.0, 1.0, 1.0};
  return enumerate_images(unit, {0.5, 0.5, 0.5}, max_order).size();
}

Rir image_source_rir(const RoomSpec& room, const Vec3& source_pos,
                     const Vec3& mic_pos) {
  validate(room);
  if (!strictly_inside(source_pos, room.dims) ||
      !strictly_inside(mic_pos, room.dims))
    throw std::invalid_argument("image_source_rir: positions must be inside the room");
  const double beta = calibrated_beta(room, reflection_coeff_from_rt60(room));
  const int max_order = resolve_max_order(room, beta);
  const auto images = enumerate_images(room, source_pos, max_order);
  Receiver rx{mic_pos, {0.0, 0.0, 0.0}, Rir::Channel::kMono};
  return render_receiver(room, images, beta, rx, /*spherical=*/false);
}

std::pair<Rir, Rir> binaural_rir_pair(const RoomSpec& room,
                                      const ArrayGeometry& geom,
                                      HeadModel head_model) {
  validate(geom, room);
  const double beta = calibrated_beta(room, reflection_coeff_from_rt60(room));
  const int max_order = resolve_max_order(room, beta);
  const auto images = enumerate_images(room, geom.source_pos(), max_order);
  const bool spherical = (head_model == HeadModel::kSpherical);

  Receiver left{geom.mic_left(), {0.0, 1.0, 0.0}, Rir::Channel::kLeft};
  Receiver right{geom.mic_right(), {0.0, -1.0, 0.0}, Rir::Channel::kRight};
  Rir l = render_receiver(room, images, beta, left, spherical);
  Rir r = render_receiver(room, images, beta, right, spherical);
  // The per-channel tail truncation can land a few taps apart; a pair is
  // only usable when both channels cover the same span.
  const std::size_t len = std::max(l.taps.size(), r.taps.size());
  l.taps.resize(len, 0.0);
  r.taps.resize(len, 0.0);
  return {std::move(l), std::move(r)};
}

std::pair<Rir, Rir> split_rir(const Rir& rir, double boundary_ms,
                              std::ptrdiff_t direct_index) {
  if (rir.taps.empty()) throw std::invalid_argument("split_rir: empty RIR");
  if (boundary_ms < 0.0)
    throw std::invalid_argument("split_rir: boundary must be nonnegative");
  if (direct_index < 0 ||
      direct_index >= static_cast<std::ptrdiff_t>(rir.taps.size()))
    throw std::invalid_argument("split_rir: direct index out of range");

  const std::ptrdiff_t boundary_taps = static_cast<std::ptrdiff_t>(
      std::llround(boundary_ms / 1000.0 * rir.sample_rate_hz));
  const std::size_t cut =
      std::min(rir.taps.size(),
               static_cast<std::size_t>(direct_index + boundary_taps + 1));

  Rir early = rir, late = rir;
  std::fill(early.taps.begin() + cut, early.taps.end(), 0.0);
  std::fill(late.taps.begin(), late.taps.begin() + cut, 0.0);
  return {std::move(early), std::move(late)};
}

double schroeder_rt60(const Rir& rir) {
  if (rir.taps.empty()) throw std::invalid_argument("schroeder_rt60: empty RIR");
  const std::size_t n = rir.taps.size();
  std::vector<double> edc(n);
  double acc = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    acc += rir.taps[i] * rir.taps[i];
    edc[i] = acc;
  }
  if (edc[0] <= 0.0)
    throw std::runtime_error("schroeder_rt60: insufficient decay range");

  // Fit t -> EDC(dB) on the -5..-25 dB segment.
  const double fs = rir.sample_rate_hz;
  double sum_t = 0.0, sum_d = 0.0, sum_tt = 0.0, sum_td = 0.0;
  std::size_t count = 0;
  double min_db = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (edc[i] <= 0.0) break;
    const double db = 10.0 * std::log10(edc[i] / edc[0]);
    min_db = db;
    if (db > -5.0 || db < -25.0) continue;
    const double t = static_cast<double>(i) / fs;
    sum_t += t;
    sum_d += db;
    sum_tt += t * t;
    sum_td += t * db;
    ++count;
  }
  if (min_db > -35.0 || count < 2)
    throw std::runtime_error("schroeder_rt60: insufficient decay range");

  const double denom = count * sum_tt - sum_t * sum_t;
  if (std::abs(denom) < 1e-30)
    throw std::runtime_error("schroeder_rt60: insufficient decay range");
  const double slope = (count * sum_td - sum_t * sum_d) / denom;  // dB per s
  if (slope >= 0.0)
    throw std::runtime_error("schroeder_rt60: insufficient decay range");
  return -60.0 / slope;
}

void save_rir_pair(const Rir& left, const Rir& right, const std::string& path) {
  if (left.sample_rate_hz != right.sample_rate_hz)
    throw std::invalid_argument("save_rir_pair: rate mismatch");
  const std::size_t n = std::max(left.taps.size(), right.taps.size());
  Waveform l, r;
  l.sample_rate_hz = r.sample_rate_hz = left.sample_rate_hz;
  l.samples = left.taps;
  r.samples = right.taps;
  l.samples.resize(n, 0.0);
  r.samples.resize(n, 0.0);
  save_wav({l, r}, path, WavFormat::kFloat32);
}

std::pair<Rir, Rir> load_rir_pair(const std::string& path) {
  auto channels = load_wav(path);
  if (channels.size() != 2)
    throw std::runtime_error("load_rir_pair: expected a stereo WAV: " + path);
  auto to_rir = [](const Waveform& w, Rir::Channel ch) {
    Rir rir;
    rir.sample_rate_hz = w.sample_rate_hz;
    rir.taps = w.samples;
    rir.channel = ch;
    // Direct arrival taken at the strongest tap; good enough for splitting
    // and alignment of measured responses.
    std::size_t peak = 0;
    for (std::size_t i = 1; i < rir.taps.size(); ++i)
      if (std::abs(rir.taps[i]) > std::abs(rir.taps[peak])) peak = i;
    rir.direct_index = static_cast<std::ptrdiff_t>(peak);
    return rir;
  };
  return {to_rir(channels[0], Rir::Channel::kLeft),
          to_rir(channels[1], Rir::Channel::kRight)};
}

}  // namespace binderev
