// tools/binderev_main.cc

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

// Command-line front end.  Subcommands:
//
//   run            full experiment grid from a config file (docs/config.md)
//   process        enhance one stereo pair, write WAV + sidecar JSON
//   simulate-room  render binaural impulse-response pairs to WAV
//   metrics        one CSV line of sdr_db,stoi,srmr_db,cd for a file pair
//   summarize      per-room / overall averages of a results.csv
//   dump-cues      ILD/IPD grids of a pair as CSV, for plotting
//
// Exit codes: 0 success, 1 runtime failure (including failed grid cells),
// 2 usage error.  CLI11 parse errors keep CLI11's own codes.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "binderev/cues.h"
#include "binderev/harness.h"
#include "binderev/metrics.h"
#include "binderev/roomsim.h"
#include "binderev/stft.h"
#include "binderev/wav_io.h"

namespace fs = std::filesystem;

namespace {

using namespace binderev;

Waveform load_mono(const std::string& path, const char* role) {
  const std::vector<Waveform> channels = load_wav(path);
  if (channels.size() != 1) {
    throw std::runtime_error(std::string(role) + " must be mono: " + path +
                             " has " + std::to_string(channels.size()) +
                             " channels");
  }
  return channels[0];
}

std::string fs_safe(std::string name) {
  for (char& c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.')
      c = '_';
  return name;
}

// --- run ---------------------------------------------------------------

int cmd_run(const std::string& config_path, const std::string& output_dir,
            std::optional<std::uint64_t> seed) {
  ExperimentConfig cfg = parse_experiment_config(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  if (seed) cfg.seed = *seed;

  const RunSummary summary = run_experiment(cfg);
  std::cout << "rows:    " << summary.total_cells << " ("
            << summary.failed_cells << " failed)\n"
            << "results: " << summary.results_csv_path << "\n"
            << "summary: " << summary.summary_csv_path << "\n";
  return summary.failed_cells == 0 ? 0 : 1;
}

// --- process -----------------------------------------------------------

int cmd_process(const std::string& left_path, const std::string& right_path,
                const std::string& out_path, const ProcessParams& params,
                const std::string& direct_left_path,
                const std::string& direct_right_path,
                const std::string& template_rir_path) {
  const Waveform left = load_mono(left_path, "--left");
  const Waveform right = load_mono(right_path, "--right");

  ProcessParams p = params;
  Waveform direct_l, direct_r;
  if (p.backend == "oracle") {
    direct_l = load_mono(direct_left_path, "--direct-left");
    direct_r = load_mono(direct_right_path, "--direct-right");
    p.direct_left = &direct_l;
    p.direct_right = &direct_r;
  }
  if (!template_rir_path.empty())
    p.template_pair = load_rir_pair(template_rir_path);

  std::string sidecar;
  const Waveform out = process_pair(left, right, p, &sidecar);
  save_wav(out, out_path, WavFormat::kFloat32);

  const std::string sidecar_path = out_path + ".json";
  std::ofstream sidecar_out(sidecar_path);
  if (!sidecar_out)
    throw std::runtime_error("cannot write " + sidecar_path);
  sidecar_out << sidecar;

  std::cout << out_path << "\n" << sidecar_path << "\n";
  return 0;
}

// --- simulate-room -----------------------------------------------------

int cmd_simulate_room(const std::string& config_path,
                      const std::string& out_dir) {
  const ExperimentConfig cfg = parse_experiment_config(config_path);
  // Only the room/azimuth half of the config matters here, so a full
  // validate() (which would insist on utterances) is deliberately skipped;
  // the renderer checks each room and geometry itself.
  if (cfg.rooms.empty())
    throw std::invalid_argument("config: need at least one room");
  if (cfg.azimuths_deg.empty())
    throw std::invalid_argument("config: need at least one azimuth");
  fs::create_directories(out_dir);

  const std::string manifest_path =
      (fs::path(out_dir) / "rooms.csv").string();
  std::ofstream manifest(manifest_path);
  if (!manifest) throw std::runtime_error("cannot write " + manifest_path);
  manifest << "room,azimuth_deg,distance_m,rt60_target_s,rt60_measured_s,"
              "taps,path\n";

  for (const RoomEntry& entry : cfg.rooms) {
    if (!entry.brir_dir.empty()) {
      std::cerr << "simulate-room: skipping measured room '" << entry.name
                << "' (brir_dir is set)\n";
      continue;
    }
    const fs::path room_dir = fs::path(out_dir) / fs_safe(entry.name);
    fs::create_directories(room_dir);

    for (double azimuth : cfg.azimuths_deg) {
      ArrayGeometry geom;
      geom.array_center =
          entry.array_center
              ? *entry.array_center
              : Vec3{entry.room.dims.x / 2, entry.room.dims.y / 2,
                     entry.room.dims.z / 2};
      geom.source_azimuth_deg = azimuth;
      geom.source_distance_m = entry.distance_m;

      const auto [left, right] =
          binaural_rir_pair(entry.room, geom, cfg.head_model);

      const std::string name =
          "az" + std::to_string(static_cast<int>(std::lround(azimuth))) +
          ".wav";
      const std::string path = (room_dir / name).string();
      save_rir_pair(left, right, path);

      // Anechoic and near-anechoic renders have no measurable decay; the
      // manifest column stays empty for them.
      std::string measured;
      try {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", schroeder_rt60(left));
        measured = buf;
      } catch (const std::exception&) {
      }

      char row[512];
      std::snprintf(row, sizeof(row), "%s,%.1f,%.2f,%.3f,%s,%zu,%s\n",
                    entry.name.c_str(), azimuth, entry.distance_m,
                    entry.room.rt60_s, measured.c_str(), left.taps.size(),
                    path.c_str());
      manifest << row;
    }
    std::cout << entry.name << ": " << cfg.azimuths_deg.size()
              << " pair(s) under " << room_dir.string() << "\n";
  }
  std::cout << "manifest: " << manifest_path << "\n";
  return 0;
}

// --- metrics -----------------------------------------------------------

int cmd_metrics(const std::string& ref_path, const std::string& est_path) {
  const Waveform ref = load_mono(ref_path, "--ref");
  const Waveform est = load_mono(est_path, "--est");
  const MetricsReport m = evaluate(ref, est);
  std::printf("%.6f,%.6f,%.6f,%.6f\n", m.sdr_db, m.stoi, m.srmr_db, m.cd);
  return 0;
}

// --- summarize ----------------------------------------------------------

int cmd_summarize(const std::string& report_path) {
  std::ifstream in(report_path);
  if (!in) throw std::runtime_error("cannot open " + report_path);
  std::ostringstream text;
  text << in.rdbuf();
  std::cout << summarize_report(text.str());
  return 0;
}

// --- dump-cues ----------------------------------------------------------

int cmd_dump_cues(const std::string& left_path, const std::string& right_path,
                  const std::string& out_path, const StftConfig& stft_cfg) {
  const Waveform left = load_mono(left_path, "--left");
  const Waveform right = load_mono(right_path, "--right");
  if (left.sample_rate_hz != right.sample_rate_hz)
    throw std::runtime_error("sample rate mismatch between --left and --right");

  // Pipeline convention: the right microphone is channel 1 of the ratio.
  const CueGrid cues =
      extract_cues(stft(right, stft_cfg), stft(left, stft_cfg));

  if (out_path.empty() || out_path == "-") {
    dump_cue_csv(cues, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    dump_cue_csv(cues, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"binderev: binaural single-source dereverberation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "binderev 0.1.0");

  // run
  std::string run_config, run_output_dir;
  std::optional<std::uint64_t> run_seed;
  CLI::App* run = app.add_subcommand(
      "run", "Run the experiment grid described by a config file");
  run->add_option("--config", run_config, "Experiment config (docs/config.md)")
      ->required();
  run->add_option("--output-dir", run_output_dir,
                  "Override the config's output_dir");
  run->add_option("--seed", run_seed, "Override the config's seed");

  // process
  std::string pr_left, pr_right, pr_out;
  std::string pr_direct_left, pr_direct_right, pr_template_rir;
  std::string pr_downmix = "sum", pr_head_model = "none";
  ProcessParams pr_params;
  CLI::App* process = app.add_subcommand(
      "process", "Enhance one stereo pair; writes <out> and <out>.json");
  process->add_option("--left", pr_left, "Left-channel WAV")->required();
  process->add_option("--right", pr_right, "Right-channel WAV")->required();
  process->add_option("--out", pr_out, "Output WAV path")->required();
  process->add_option("--backend", pr_params.backend,
                      "oracle | cue-template")
      ->check(CLI::IsMember({"oracle", "cue-template"}))
      ->capture_default_str();
  process->add_option("--direct-left", pr_direct_left,
                      "Direct-path reference at the left mic (oracle backend)");
  process->add_option("--direct-right", pr_direct_right,
                      "Direct-path reference at the right mic (oracle backend)");
  process->add_option("--template-rir", pr_template_rir,
                      "Stereo impulse-response WAV to build cue templates from "
                      "(default: synthetic anechoic render)");
  process->add_option("--template-azimuth", pr_params.template_azimuth_deg,
                      "Template azimuth, degrees")
      ->capture_default_str();
  process->add_option("--template-distance", pr_params.template_distance_m,
                      "Template source distance, metres")
      ->capture_default_str();
  process->add_option("--sigma-ild", pr_params.sigma_ild_db,
                      "ILD kernel width, dB")
      ->capture_default_str();
  process->add_option("--sigma-ipd", pr_params.sigma_ipd_rad,
                      "IPD kernel width, radians")
      ->capture_default_str();
  process->add_option("--downmix", pr_downmix, "sum | average")
      ->check(CLI::IsMember({"sum", "average"}))
      ->capture_default_str();
  process->add_option("--head-model", pr_head_model, "none | spherical")
      ->check(CLI::IsMember({"none", "spherical"}))
      ->capture_default_str();
  process->add_option("--frame-len", pr_params.stft.frame_len, "STFT frame")
      ->capture_default_str();
  process->add_option("--hop", pr_params.stft.hop, "STFT hop")
      ->capture_default_str();

  // simulate-room
  std::string sim_config, sim_out_dir;
  CLI::App* simulate = app.add_subcommand(
      "simulate-room",
      "Render binaural impulse-response pairs for each configured room");
  simulate->add_option("--config", sim_config, "Config with [room] sections")
      ->required();
  simulate->add_option("--out-dir", sim_out_dir, "Output directory")
      ->required();

  // metrics
  std::string me_ref, me_est;
  CLI::App* metrics = app.add_subcommand(
      "metrics", "Print sdr_db,stoi,srmr_db,cd for a reference/estimate pair");
  metrics->add_option("--ref", me_ref, "Reference WAV")->required();
  metrics->add_option("--est", me_est, "Estimate WAV")->required();

  // summarize
  std::string su_report;
  CLI::App* summarize = app.add_subcommand(
      "summarize", "Recompute per-room and overall averages of a results.csv");
  summarize->add_option("--report", su_report, "results.csv path")->required();

  // dump-cues
  std::string dc_left, dc_right, dc_out = "-";
  StftConfig dc_stft;
  CLI::App* dump_cues = app.add_subcommand(
      "dump-cues", "Write the ILD/IPD grids of a pair as CSV");
  dump_cues->add_option("--left", dc_left, "Left-channel WAV")->required();
  dump_cues->add_option("--right", dc_right, "Right-channel WAV")->required();
  dump_cues->add_option("--out", dc_out, "Output CSV ('-' for stdout)")
      ->capture_default_str();
  dump_cues->add_option("--frame-len", dc_stft.frame_len, "STFT frame")
      ->capture_default_str();
  dump_cues->add_option("--hop", dc_stft.hop, "STFT hop")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_config, run_output_dir, run_seed);
    if (*process) {
      if (pr_params.backend == "oracle" &&
          (pr_direct_left.empty() || pr_direct_right.empty())) {
        std::cerr << "process: the oracle backend requires --direct-left and "
                     "--direct-right\nRun with --help for more information.\n";
        return 2;
      }
      pr_params.downmix =
          pr_downmix == "average" ? Downmix::kAverage : Downmix::kSum;
      pr_params.head_model = pr_head_model == "spherical"
                                 ? HeadModel::kSpherical
                                 : HeadModel::kNone;
      return cmd_process(pr_left, pr_right, pr_out, pr_params, pr_direct_left,
                         pr_direct_right, pr_template_rir);
    }
    if (*simulate) return cmd_simulate_room(sim_config, sim_out_dir);
    if (*metrics) return cmd_metrics(me_ref, me_est);
    if (*summarize) return cmd_summarize(su_report);
    if (*dump_cues) return cmd_dump_cues(dc_left, dc_right, dc_out, dc_stft);
  } catch (const std::exception& ex) {
    std::cerr << "binderev: error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
