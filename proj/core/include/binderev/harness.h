// core/include/binderev/harness.h

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

#ifndef BINDEREV_HARNESS_H_
#define BINDEREV_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "binderev/masking.h"
#include "binderev/metrics.h"
#include "binderev/rir.h"
#include "binderev/roomsim.h"
#include "binderev/stft.h"
#include "binderev/waveform.h"

namespace binderev {

// One room of the experiment grid: either a simulated shoebox or a directory
// of measured impulse-response pairs named az<degrees>.wav (stereo,
// left/right).
struct RoomEntry {
  std::string name;
  RoomSpec room;
  std::string brir_dir;  // non-empty selects measured mode
  double distance_m = 1.0;
  std::optional<Vec3> array_center;  // default: room center
};

struct ExperimentConfig {
  std::vector<RoomEntry> rooms;
  std::vector<double> azimuths_deg = {0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0};
  // WAV paths, or "synth:<count>" for built-in seeded test utterances.
  std::vector<std::string> utterances;
  std::string backend = "cue-template";  // "oracle" | "cue-template"
  double sigma_ild_db = 3.0;
  double sigma_ipd_rad = 0.5235987755982988;
  // Matched-azimuth templates when negative; otherwise every cell uses
  // templates built for this one azimuth, to probe deliberate mismatch.
  double fixed_template_azimuth_deg = -1.0;
  std::vector<std::string> baselines;  // subset of {"ss", "wpe"}
  Downmix downmix = Downmix::kSum;
  HeadModel head_model = HeadModel::kNone;
  StftConfig stft;
  std::string output_dir = "binderev-out";
  std::uint64_t seed = 1;
  bool save_audio = false;

  void validate() const;
};

// Flat key-value file with [room NAME] sections; see docs/config.md for the
// schema.  Throws with the offending key or line on malformed input.
ExperimentConfig parse_experiment_config(const std::string& path);

struct RunSummary {
  std::size_t total_cells = 0;
  std::size_t failed_cells = 0;  // nonzero should map to a nonzero exit code
  std::string results_csv_path;
  std::string summary_csv_path;
};

// Executes the full rooms x azimuths x utterances grid, one row per
// (cell, algorithm), fail-soft per cell.  Writes results.csv and summary.csv
// under config.output_dir.  Identical config + seed gives bit-identical
// files.
RunSummary run_experiment(const ExperimentConfig& config);

// Per-(room, algorithm) means of a results.csv body, with deltas against the
// unprocessed rows of the same room, plus ALL rows across rooms.  Takes and
// returns CSV text.  Throws on an empty or headerless report.
std::string summarize_report(const std::string& report_csv_text);

// Single-shot processing of one stereo pair outside the experiment grid.
struct ProcessParams {
  std::string backend = "cue-template";
  double sigma_ild_db = 3.0;
  double sigma_ipd_rad = 0.5235987755982988;
  // Cue templates come from a caller-supplied impulse-response pair when
  // present, otherwise from a synthetic anechoic render at this azimuth.
  std::optional<std::pair<Rir, Rir>> template_pair;
  double template_azimuth_deg = 0.0;
  double template_distance_m = 1.0;
  HeadModel head_model = HeadModel::kNone;
  // Oracle backend needs the direct-path signals at both microphones.
  const Waveform* direct_left = nullptr;
  const Waveform* direct_right = nullptr;
  Downmix downmix = Downmix::kSum;
  StftConfig stft;
};

// Runs the cue -> mask -> fuse -> reconstruct pipeline on one pair.  When
// `sidecar_json` is non-null it receives a small metadata document (backend,
// sigmas, downmix, deterministic config hash) for writing next to the output.
Waveform process_pair(const Waveform& left, const Waveform& right,
                      const ProcessParams& params,
                      std::string* sidecar_json = nullptr);

// Trims an impulse-response pair to a window usable for template building:
// leading all-zero taps common to both channels are dropped, trailing zeros
// removed.  Throws if the remainder still exceeds frame_len.
std::pair<Rir, Rir> trim_rir_pair_for_templates(const Rir& left,
                                                const Rir& right,
                                                std::size_t frame_len);

}  // namespace binderev

#endif  // BINDEREV_HARNESS_H_
