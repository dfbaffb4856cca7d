// core/src/harness.cc

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

#include "binderev/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "binderev/baselines.h"
#include "binderev/signal_gen.h"
#include "binderev/wav_io.h"

namespace fs = std::filesystem;

namespace binderev {

namespace {

// Window kept around the direct arrival when splitting a pair for the
// oracle reference / cue templates: wide enough for the fractional-delay
// stencil plus the head-shadow filter ring-out, short against any first
// reflection in rooms this size.
constexpr double kDirectWindowMs = 3.0;

constexpr const char* kResultsHeader =
    "room,azimuth_deg,utterance,algorithm,status,sdr_db,stoi,srmr_db,cd";
constexpr const char* kSummaryHeader =
    "room,algorithm,cells,sdr_db,stoi,srmr_db,cd,"
    "ref_sdr_db,ref_stoi,ref_srmr_db,ref_cd,"
    "delta_sdr_db,delta_stoi,delta_srmr_db,delta_cd";

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string fmt_az(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::string trim_ws(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: invalid value for '" + key + "'");
  }
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

}  // namespace

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (rooms.empty())
    throw std::invalid_argument("config: need at least one room");
  if (azimuths_deg.empty())
    throw std::invalid_argument("config: need at least one azimuth");
  if (utterances.empty())
    throw std::invalid_argument("config: need at least one utterance");
  for (double az : azimuths_deg)
    if (az < 0.0 || az > 90.0)
      throw std::invalid_argument("config: azimuth outside [0, 90]");
  if (backend != "oracle" && backend != "cue-template")
    throw std::invalid_argument("config: unknown backend '" + backend + "'");
  for (const std::string& b : baselines)
    if (b != "ss" && b != "wpe")
      throw std::invalid_argument("config: unknown baseline '" + b + "'");
  if (!(sigma_ild_db > 0.0) || !(sigma_ipd_rad > 0.0))
    throw std::invalid_argument("config: sigmas must be positive");
  for (const RoomEntry& entry : rooms) {
    if (entry.name.empty())
      throw std::invalid_argument("config: room without a name");
    if (entry.brir_dir.empty()) binderev::validate(entry.room);
  }
  binderev::validate(stft);
}

ExperimentConfig parse_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("config: cannot open file: " + path);

  ExperimentConfig cfg;
  bool saw_azimuths = false;
  RoomEntry* room = nullptr;

  std::string raw;
  while (std::getline(in, raw)) {
    const std::string line = trim_ws(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: malformed section header: " + line);
      const std::vector<std::string> head =
          split_ws(line.substr(1, line.size() - 2));
      if (head.size() < 2 || head[0] != "room")
        throw std::invalid_argument("config: malformed section header: " + line);
      std::string name = head[1];
      for (std::size_t i = 2; i < head.size(); ++i) name += " " + head[i];
      cfg.rooms.push_back(RoomEntry{});
      room = &cfg.rooms.back();
      room->name = name;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected 'key = value': " + line);
    const std::string key = trim_ws(line.substr(0, eq));
    const std::string value = trim_ws(line.substr(eq + 1));

    if (room == nullptr) {
      if (key == "azimuths") {
        if (!saw_azimuths) {
          cfg.azimuths_deg.clear();
          saw_azimuths = true;
        }
        for (const std::string& t : split_ws(value))
          cfg.azimuths_deg.push_back(parse_double(t, key));
      } else if (key == "utterances") {
        for (const std::string& t : split_ws(value))
          cfg.utterances.push_back(t);
      } else if (key == "backend") {
        cfg.backend = value;
      } else if (key == "sigma_ild_db") {
        cfg.sigma_ild_db = parse_double(value, key);
      } else if (key == "sigma_ipd_rad") {
        cfg.sigma_ipd_rad = parse_double(value, key);
      } else if (key == "fixed_template_azimuth") {
        cfg.fixed_template_azimuth_deg = parse_double(value, key);
      } else if (key == "baselines") {
        cfg.baselines = split_ws(value);
      } else if (key == "downmix") {
        if (value == "sum")
          cfg.downmix = Downmix::kSum;
        else if (value == "average")
          cfg.downmix = Downmix::kAverage;
        else
          throw std::invalid_argument("config: invalid value for 'downmix'");
      } else if (key == "head_model") {
        if (value == "none")
          cfg.head_model = HeadModel::kNone;
        else if (value == "spherical")
          cfg.head_model = HeadModel::kSpherical;
        else
          throw std::invalid_argument("config: invalid value for 'head_model'");
      } else if (key == "output_dir") {
        cfg.output_dir = value;
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_double(value, key));
      } else if (key == "save_audio") {
        if (value == "true" || value == "1")
          cfg.save_audio = true;
        else if (value == "false" || value == "0")
          cfg.save_audio = false;
        else
          throw std::invalid_argument("config: invalid value for 'save_audio'");
      } else if (key == "frame_len") {
        cfg.stft.frame_len =
            static_cast<std::size_t>(parse_double(value, key));
      } else if (key == "hop") {
        cfg.stft.hop = static_cast<std::size_t>(parse_double(value, key));
      } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
      }
    } else {
      if (key == "dims") {
        const std::vector<std::string> t = split_ws(value);
        if (t.size() != 3)
          throw std::invalid_argument("config: invalid value for 'dims'");
        room->room.dims = {parse_double(t[0], key), parse_double(t[1], key),
                           parse_double(t[2], key)};
      } else if (key == "rt60") {
        room->room.rt60_s = parse_double(value, key);
      } else if (key == "distance") {
        room->distance_m = parse_double(value, key);
      } else if (key == "max_order") {
        room->room.max_order = static_cast<int>(parse_double(value, key));
      } else if (key == "sample_rate") {
        room->room.sample_rate_hz = static_cast<int>(parse_double(value, key));
      } else if (key == "brir_dir") {
        room->brir_dir = value;
      } else if (key == "center") {
        const std::vector<std::string> t = split_ws(value);
        if (t.size() != 3)
          throw std::invalid_argument("config: invalid value for 'center'");
        room->array_center = Vec3{parse_double(t[0], key),
                                  parse_double(t[1], key),
                                  parse_double(t[2], key)};
      } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
      }
    }
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Template helpers
// ---------------------------------------------------------------------------

std::pair<Rir, Rir> trim_rir_pair_for_templates(const Rir& left,
                                                const Rir& right,
                                                std::size_t frame_len) {
  const auto first_nonzero = [](const Rir& r) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < r.taps.size(); ++i)
      if (r.taps[i] != 0.0) return static_cast<std::ptrdiff_t>(i);
    return -1;
  };
  const auto last_nonzero = [](const Rir& r) -> std::ptrdiff_t {
    for (std::size_t i = r.taps.size(); i-- > 0;)
      if (r.taps[i] != 0.0) return static_cast<std::ptrdiff_t>(i);
    return -1;
  };
  const std::ptrdiff_t fl = first_nonzero(left);
  const std::ptrdiff_t fr = first_nonzero(right);
  if (fl < 0 || fr < 0)
    throw std::invalid_argument("templates: silent impulse response");
  // Only the leading zeros common to both channels may go; the residual
  // inter-channel offset is exactly the interaural delay the templates
  // encode.
  const std::ptrdiff_t lead = std::min(fl, fr);
  const std::ptrdiff_t tail = std::max(last_nonzero(left), last_nonzero(right));
  const std::size_t len = static_cast<std::size_t>(tail - lead + 1);
  if (len > frame_len)
    throw std::invalid_argument(
        "templates: direct-path impulse response longer than one frame");

  const auto cut = [&](const Rir& r) {
    Rir out = r;
    out.taps.assign(r.taps.begin() + lead, r.taps.begin() + tail + 1);
    if (out.direct_index >= 0) out.direct_index -= lead;
    return out;
  };
  return {cut(left), cut(right)};
}

namespace {

ArrayGeometry make_geometry(const RoomEntry& entry, double azimuth_deg) {
  ArrayGeometry geom;
  geom.array_center = entry.array_center
                          ? *entry.array_center
                          : Vec3{entry.room.dims.x / 2, entry.room.dims.y / 2,
                                 entry.room.dims.z / 2};
  geom.source_azimuth_deg = azimuth_deg;
  geom.source_distance_m = entry.distance_m;
  return geom;
}

std::string brir_path(const RoomEntry& entry, double azimuth_deg) {
  return (fs::path(entry.brir_dir) /
          ("az" + std::to_string(static_cast<int>(std::lround(azimuth_deg))) +
           ".wav"))
      .string();
}

struct CellRirs {
  Rir left, right;
  Rir direct_left, direct_right;
};

CellRirs make_cell_rirs(const RoomEntry& entry, double azimuth_deg,
                        HeadModel head_model) {
  CellRirs out;
  if (!entry.brir_dir.empty()) {
    std::tie(out.left, out.right) = load_rir_pair(brir_path(entry, azimuth_deg));
  } else {
    std::tie(out.left, out.right) =
        binaural_rir_pair(entry.room, make_geometry(entry, azimuth_deg),
                          head_model);
  }
  out.direct_left =
      split_rir(out.left, kDirectWindowMs, out.left.direct_index).first;
  out.direct_right =
      split_rir(out.right, kDirectWindowMs, out.right.direct_index).first;
  return out;
}

CueTemplates make_templates(const RoomEntry& entry, double template_az,
                            HeadModel head_model, const StftConfig& stft_cfg,
                            double sigma_ild_db, double sigma_ipd_rad) {
  Rir direct_l, direct_r;
  if (!entry.brir_dir.empty()) {
    auto [l, r] = load_rir_pair(brir_path(entry, template_az));
    direct_l = split_rir(l, kDirectWindowMs, l.direct_index).first;
    direct_r = split_rir(r, kDirectWindowMs, r.direct_index).first;
  } else {
    RoomSpec anechoic = entry.room;
    anechoic.rt60_s = 0.0;
    anechoic.max_order = 0;
    std::tie(direct_l, direct_r) = binaural_rir_pair(
        anechoic, make_geometry(entry, template_az), head_model);
  }
  auto [tl, tr] =
      trim_rir_pair_for_templates(direct_l, direct_r, stft_cfg.frame_len);
  // Interaural-ratio channel 1 is the right microphone throughout the
  // pipeline (the azimuth sweep runs toward the right ear), so the right
  // transfer function goes in first.
  CueTemplates tmpl = build_templates(tr, tl, stft_cfg, template_az);
  tmpl.sigma_ild_db = sigma_ild_db;
  tmpl.sigma_ipd_rad = sigma_ipd_rad;
  return tmpl;
}

// ---------------------------------------------------------------------------
// Rows and summaries
// ---------------------------------------------------------------------------

struct Row {
  std::string room;
  double azimuth_deg = 0.0;
  std::string utterance;
  std::string algorithm;
  bool ok = false;
  std::string error;
  MetricsReport metrics;
};

bool row_less(const Row& a, const Row& b) {
  if (a.room != b.room) return a.room < b.room;
  if (a.azimuth_deg != b.azimuth_deg) return a.azimuth_deg < b.azimuth_deg;
  if (a.utterance != b.utterance) return a.utterance < b.utterance;
  return a.algorithm < b.algorithm;
}

std::string format_row(const Row& r) {
  std::string out = r.room + "," + fmt_az(r.azimuth_deg) + "," + r.utterance +
                    "," + r.algorithm + ",";
  if (r.ok) {
    out += "ok," + fmt6(r.metrics.sdr_db) + "," + fmt6(r.metrics.stoi) + "," +
           fmt6(r.metrics.srmr_db) + "," + fmt6(r.metrics.cd);
  } else {
    out += "error:" + sanitize(r.error) + ",,,,";
  }
  return out;
}

struct Accum {
  std::size_t n = 0;
  double sdr = 0.0, stoi = 0.0, srmr = 0.0, cd = 0.0;

  void add(const MetricsReport& m) {
    ++n;
    sdr += m.sdr_db;
    stoi += m.stoi;
    srmr += m.srmr_db;
    cd += m.cd;
  }
  MetricsReport mean() const {
    MetricsReport m;
    m.sdr_db = sdr / n;
    m.stoi = stoi / n;
    m.srmr_db = srmr / n;
    m.cd = cd / n;
    return m;
  }
};

// Per-(room, algorithm) means with deltas against the room's unprocessed
// rows, then ALL rows across every room.  Only ok rows participate.
std::string summarize_rows(const std::vector<Row>& rows) {
  std::map<std::string, std::map<std::string, Accum>> by_room;
  std::map<std::string, Accum> overall;
  for (const Row& r : rows) {
    if (!r.ok) continue;
    by_room[r.room][r.algorithm].add(r.metrics);
    overall[r.algorithm].add(r.metrics);
  }
  if (by_room.empty()) throw std::invalid_argument("summarize: empty report");

  std::string out = std::string(kSummaryHeader) + "\n";
  const auto emit = [&out](const std::string& room, const std::string& alg,
                           const Accum& acc, const Accum* ref) {
    const MetricsReport m = acc.mean();
    out += room + "," + alg + "," + std::to_string(acc.n) + "," +
           fmt6(m.sdr_db) + "," + fmt6(m.stoi) + "," + fmt6(m.srmr_db) + "," +
           fmt6(m.cd);
    if (ref != nullptr && ref->n > 0) {
      const MetricsReport u = ref->mean();
      out += "," + fmt6(u.sdr_db) + "," + fmt6(u.stoi) + "," +
             fmt6(u.srmr_db) + "," + fmt6(u.cd) + "," +
             fmt6(m.sdr_db - u.sdr_db) + "," + fmt6(m.stoi - u.stoi) + "," +
             fmt6(m.srmr_db - u.srmr_db) + "," + fmt6(m.cd - u.cd);
    } else {
      out += ",,,,,,,,";
    }
    out += "\n";
  };

  for (const auto& [room, algs] : by_room) {
    const auto ref_it = algs.find("unprocessed");
    const Accum* ref = ref_it == algs.end() ? nullptr : &ref_it->second;
    for (const auto& [alg, acc] : algs) {
      if (alg == "unprocessed") continue;
      emit(room, alg, acc, ref);
    }
  }
  const auto ref_it = overall.find("unprocessed");
  const Accum* ref = ref_it == overall.end() ? nullptr : &ref_it->second;
  for (const auto& [alg, acc] : overall) {
    if (alg == "unprocessed") continue;
    emit("ALL", alg, acc, ref);
  }
  return out;
}

}  // namespace

std::string summarize_report(const std::string& report_csv_text) {
  std::istringstream is(report_csv_text);
  std::string line;
  if (!std::getline(is, line) || trim_ws(line) != kResultsHeader)
    throw std::invalid_argument("summarize: malformed report header");

  std::vector<Row> rows;
  while (std::getline(is, line)) {
    if (trim_ws(line).empty()) continue;
    std::vector<std::string> f;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) f.push_back(field);
    if (f.size() < 5)
      throw std::invalid_argument("summarize: malformed report row: " + line);
    Row r;
    r.room = f[0];
    r.azimuth_deg = parse_double(f[1], "azimuth_deg");
    r.utterance = f[2];
    r.algorithm = f[3];
    r.ok = f[4] == "ok";
    if (r.ok) {
      if (f.size() != 9)
        throw std::invalid_argument("summarize: malformed report row: " + line);
      r.metrics.sdr_db = parse_double(f[5], "sdr_db");
      r.metrics.stoi = parse_double(f[6], "stoi");
      r.metrics.srmr_db = parse_double(f[7], "srmr_db");
      r.metrics.cd = parse_double(f[8], "cd");
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw std::invalid_argument("summarize: empty report");
  return summarize_rows(rows);
}

// ---------------------------------------------------------------------------
// process_pair
// ---------------------------------------------------------------------------

Waveform process_pair(const Waveform& left, const Waveform& right,
                      const ProcessParams& params, std::string* sidecar_json) {
  if (left.sample_rate_hz != right.sample_rate_hz)
    throw std::invalid_argument("process: sample rate mismatch");
  binderev::validate(params.stft);

  const Spectrogram spec_l = stft(left, params.stft);
  const Spectrogram spec_r = stft(right, params.stft);
  const BandPlan plan =
      make_band_plan(params.stft.frame_len, left.sample_rate_hz);

  BackendMasks masks;
  if (params.backend == "oracle") {
    if (params.direct_left == nullptr || params.direct_right == nullptr)
      throw std::invalid_argument(
          "process: oracle backend requires direct-path references");
    const Spectrogram dl = stft(*params.direct_left, params.stft);
    const Spectrogram dr = stft(*params.direct_right, params.stft);
    masks = oracle_irm_backend(spec_l, spec_r, dl, dr);
  } else if (params.backend == "cue-template") {
    CueTemplates tmpl;
    if (params.template_pair) {
      auto [tl, tr] = trim_rir_pair_for_templates(params.template_pair->first,
                                                  params.template_pair->second,
                                                  params.stft.frame_len);
      tmpl = build_templates(tr, tl, params.stft, params.template_azimuth_deg);
      tmpl.sigma_ild_db = params.sigma_ild_db;
      tmpl.sigma_ipd_rad = params.sigma_ipd_rad;
    } else {
      RoomEntry synthetic;
      synthetic.name = "template";
      synthetic.room.dims = {6.0, 4.0, 3.0};
      synthetic.room.rt60_s = 0.0;
      synthetic.room.max_order = 0;
      synthetic.room.sample_rate_hz = left.sample_rate_hz;
      synthetic.distance_m = params.template_distance_m;
      tmpl = make_templates(synthetic, params.template_azimuth_deg,
                            params.head_model, params.stft,
                            params.sigma_ild_db, params.sigma_ipd_rad);
    }
    masks = cue_template_backend(extract_cues(spec_r, spec_l), tmpl);
  } else {
    throw std::invalid_argument("process: unknown backend '" + params.backend +
                                "'");
  }

  const SoftMask fused =
      fuse_subband(masks.ipd.direct, masks.ild.direct, plan);
  Waveform out = apply_and_reconstruct(fused, spec_l, spec_r, params.downmix);

  if (sidecar_json != nullptr) {
    nlohmann::json j;
    j["backend"] = params.backend;
    j["sigma_ild_db"] = params.sigma_ild_db;
    j["sigma_ipd_rad"] = params.sigma_ipd_rad;
    j["downmix"] = params.downmix == Downmix::kSum ? "sum" : "average";
    j["head_model"] =
        params.head_model == HeadModel::kSpherical ? "spherical" : "none";
    j["frame_len"] = params.stft.frame_len;
    j["hop"] = params.stft.hop;
    if (params.backend == "cue-template")
      j["template_azimuth_deg"] = params.template_azimuth_deg;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(j.dump())));
    j["config_hash"] = hash;
    *sidecar_json = j.dump(2) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// run_experiment
// ---------------------------------------------------------------------------

namespace {

struct UttEntry {
  std::string id;
  Waveform wave;
  std::string error;  // non-empty poisons every cell using this utterance
};

std::vector<UttEntry> load_utterances(const ExperimentConfig& cfg) {
  std::vector<UttEntry> out;
  std::size_t synth_counter = 0;
  for (const std::string& spec : cfg.utterances) {
    if (spec.rfind("synth:", 0) == 0) {
      const int count =
          static_cast<int>(parse_double(spec.substr(6), "utterances"));
      if (count <= 0)
        throw std::invalid_argument("config: invalid value for 'utterances'");
      for (int i = 0; i < count; ++i) {
        UttEntry e;
        char id[32];
        std::snprintf(id, sizeof(id), "synth-%03zu", synth_counter);
        e.id = id;
        e.wave = make_utterance(cfg.seed + synth_counter);
        ++synth_counter;
        out.push_back(std::move(e));
      }
      continue;
    }
    UttEntry e;
    e.id = stem_of(spec);
    try {
      const std::vector<Waveform> channels = load_wav(spec);
      if (channels.size() != 1)
        throw std::runtime_error("utterance not mono: " + spec);
      e.wave = normalize(channels[0]);
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    out.push_back(std::move(e));
  }
  // Duplicate stems get a disambiguating suffix so every grid cell keeps a
  // unique key.
  std::map<std::string, int> seen;
  for (UttEntry& e : out) {
    const int n = ++seen[e.id];
    if (n > 1) e.id += "#" + std::to_string(n);
  }
  return out;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config) {
  config.validate();
  fs::create_directories(config.output_dir);
  if (config.save_audio)
    fs::create_directories(fs::path(config.output_dir) / "audio");

  const std::vector<UttEntry> utts = load_utterances(config);

  std::vector<Row> rows;
  for (const RoomEntry& entry : config.rooms) {
    // Reverberation time for the spectral-subtraction baseline: always the
    // configured value when one is given, with a decay-curve measurement
    // only as a fallback for measured rooms that omit it.  Tiny values make
    // the estimator a no-op, the right behaviour near anechoic.
    double ss_rt60 = 0.0;
    std::string ss_rt60_error;
    const bool wants_ss = std::find(config.baselines.begin(),
                                    config.baselines.end(),
                                    "ss") != config.baselines.end();
    const bool wants_wpe = std::find(config.baselines.begin(),
                                     config.baselines.end(),
                                     "wpe") != config.baselines.end();

    for (double azimuth : config.azimuths_deg) {
      CellRirs rirs;
      std::string rir_error;
      try {
        rirs = make_cell_rirs(entry, azimuth, config.head_model);
      } catch (const std::exception& ex) {
        rir_error = ex.what();
      }

      if (wants_ss && ss_rt60 == 0.0 && ss_rt60_error.empty() &&
          rir_error.empty()) {
        if (entry.room.rt60_s > 0.0 || entry.brir_dir.empty()) {
          ss_rt60 = std::max(entry.room.rt60_s, 0.05);
        } else {
          try {
            ss_rt60 = schroeder_rt60(rirs.left);
          } catch (const std::exception& ex) {
            ss_rt60_error = ex.what();
          }
        }
      }

      CueTemplates templates;
      std::string template_error;
      if (config.backend == "cue-template" && rir_error.empty()) {
        const double template_az = config.fixed_template_azimuth_deg >= 0.0
                                       ? config.fixed_template_azimuth_deg
                                       : azimuth;
        try {
          templates =
              make_templates(entry, template_az, config.head_model,
                             config.stft, config.sigma_ild_db,
                             config.sigma_ipd_rad);
        } catch (const std::exception& ex) {
          template_error = ex.what();
        }
      }

      for (const UttEntry& utt : utts) {
        std::vector<std::string> algorithms = {"unprocessed", config.backend};
        if (wants_ss) algorithms.push_back("ss");
        if (wants_wpe) algorithms.push_back("wpe");

        // Shared per-cell signals; errors here poison all of the cell's rows.
        std::string cell_error = rir_error;
        if (cell_error.empty() && !utt.error.empty()) cell_error = utt.error;

        Waveform mix_l, mix_r, reference;
        Spectrogram spec_l, spec_r;
        if (cell_error.empty()) {
          try {
            mix_l = convolve(utt.wave, rirs.left.taps);
            mix_r = convolve(utt.wave, rirs.right.taps);
            reference = convolve(utt.wave, rirs.direct_left.taps);
            spec_l = stft(mix_l, config.stft);
            spec_r = stft(mix_r, config.stft);
          } catch (const std::exception& ex) {
            cell_error = ex.what();
          }
        }

        for (const std::string& alg : algorithms) {
          Row row;
          row.room = entry.name;
          row.azimuth_deg = azimuth;
          row.utterance = utt.id;
          row.algorithm = alg;
          if (!cell_error.empty()) {
            row.error = cell_error;
            rows.push_back(std::move(row));
            continue;
          }
          try {
            Waveform out;
            if (alg == "unprocessed") {
              out = mix_l;
            } else if (alg == "oracle") {
              const BandPlan plan =
                  make_band_plan(config.stft.frame_len, spec_l.sample_rate_hz);
              const Spectrogram dl =
                  stft(convolve(utt.wave, rirs.direct_left.taps), config.stft);
              const Spectrogram dr = stft(
                  convolve(utt.wave, rirs.direct_right.taps), config.stft);
              const BackendMasks masks =
                  oracle_irm_backend(spec_l, spec_r, dl, dr);
              out = apply_and_reconstruct(
                  fuse_subband(masks.ipd.direct, masks.ild.direct, plan),
                  spec_l, spec_r, config.downmix);
            } else if (alg == "cue-template") {
              if (!template_error.empty())
                throw std::runtime_error(template_error);
              const BandPlan plan =
                  make_band_plan(config.stft.frame_len, spec_l.sample_rate_hz);
              const BackendMasks masks = cue_template_backend(
                  extract_cues(spec_r, spec_l), templates);
              out = apply_and_reconstruct(
                  fuse_subband(masks.ipd.direct, masks.ild.direct, plan),
                  spec_l, spec_r, config.downmix);
            } else if (alg == "ss") {
              if (!ss_rt60_error.empty()) throw std::runtime_error(ss_rt60_error);
              SpecSubConfig ss_cfg;
              ss_cfg.rt60_s = ss_rt60;
              out = spectral_subtraction(mix_l, ss_cfg, config.stft);
            } else {  // wpe
              WpeConfig wpe_cfg;
              const std::vector<Spectrogram> derev =
                  wpe({spec_l, spec_r}, wpe_cfg);
              out = istft(derev[0]);
            }
            row.metrics = evaluate(reference, out);
            row.ok = true;
            if (config.save_audio && alg != "unprocessed") {
              const std::string name =
                  entry.name + "_az" +
                  std::to_string(static_cast<int>(std::lround(azimuth))) + "_" +
                  utt.id + "_" + alg + ".wav";
              save_wav(out,
                       (fs::path(config.output_dir) / "audio" / name).string(),
                       WavFormat::kFloat32);
            }
          } catch (const std::exception& ex) {
            row.ok = false;
            row.error = ex.what();
          }
          rows.push_back(std::move(row));
        }
      }
    }
  }

  std::sort(rows.begin(), rows.end(), row_less);

  RunSummary summary;
  summary.total_cells = rows.size();
  for (const Row& r : rows)
    if (!r.ok) ++summary.failed_cells;

  summary.results_csv_path =
      (fs::path(config.output_dir) / "results.csv").string();
  {
    std::ofstream out(summary.results_csv_path);
    if (!out)
      throw std::runtime_error("run: cannot write " + summary.results_csv_path);
    out << kResultsHeader << "\n";
    for (const Row& r : rows) out << format_row(r) << "\n";
  }

  summary.summary_csv_path =
      (fs::path(config.output_dir) / "summary.csv").string();
  {
    std::ofstream out(summary.summary_csv_path);
    if (!out)
      throw std::runtime_error("run: cannot write " + summary.summary_csv_path);
    if (summary.failed_cells < summary.total_cells)
      out << summarize_rows(rows);
    else
      out << kSummaryHeader << "\n";
  }
  return summary;
}

}  // namespace binderev
