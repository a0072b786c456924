// Copyright 2026 The spkseg Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spkseg/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "spkseg/config.hpp"
#include "spkseg/synth.hpp"

namespace spkseg {

namespace {

std::string flag_for(const std::string& key) {
  std::string flag = "--" + key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  return flag;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Writes |text| to |path|, or to |out| when path is empty.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot write output file: " + path);
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

struct PitchArgs {
  std::string audio;
  std::string out;
};

struct SegmentArgs {
  std::string audio;
  std::string out;
  bool json = false;
};

struct EvaluateArgs {
  std::string ref;
  std::string hyp;
  bool json = false;
};

struct BenchArgs {
  std::string audio;
  std::string ref;
  std::string methods = "pitch,bic-grow";
  std::size_t repeats = 1;
  std::string out;
};

struct SynthArgs {
  std::vector<double> durations;
  std::size_t speakers = 2;
  double segment_s = 5.0;
  std::vector<double> f0;
  std::vector<std::uint64_t> envelope_seeds;
  double noise = 0.01;
  int sample_rate = 8000;
  std::string out;
  std::string truth;
};

void cmd_pitch(const PitchArgs& a, const RunConfig& cfg, std::ostream& out) {
  const AudioBuffer buffer = load_wav(a.audio);
  const PitchTrack track = pitch_track(buffer, cfg.seg.pitch);
  std::ostringstream ss;
  write_pitch_tsv(ss, track);
  emit(a.out, out, ss.str());
}

void cmd_segment(const SegmentArgs& a, const RunConfig& cfg, std::ostream& out,
                 std::ostream& err) {
  const AudioBuffer buffer = load_wav(a.audio);
  const SegmentationResult result = run_method(buffer, cfg, cfg.method);
  if (!a.out.empty()) write_change_points(a.out, result.change_points);
  if (a.json) {
    out << to_json(result) << '\n';
  } else if (a.out.empty()) {
    write_change_points(out, result.change_points);
  }
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(3) << cfg.method << ": "
     << result.change_points.size() << " change points, "
     << result.candidates_examined << " examined, " << result.candidates_rejected
     << " rejected, wall time " << result.wall_time_s << " s\n";
  err << ss.str();
}

void cmd_evaluate(const EvaluateArgs& a, const RunConfig& cfg, std::ostream& out) {
  const ChangePointSet ref = read_change_points(std::filesystem::path(a.ref));
  const ChangePointSet hyp = read_change_points(std::filesystem::path(a.hyp));
  const EvalReport report = evaluate(ref, hyp, cfg.tolerance_s);
  if (a.json) {
    out << to_json(report) << '\n';
  } else {
    write_report_table(out, report);
  }
}

void cmd_bench(const BenchArgs& a, const RunConfig& cfg, std::ostream& out,
               std::ostream& err) {
  const auto names = split_list(a.methods);
  if (names.empty()) throw UsageError("--methods needs at least one method");
  std::vector<Segmenter> methods;
  for (const auto& name : names) methods.push_back(make_segmenter(cfg, name));
  const ChangePointSet ref = read_change_points(std::filesystem::path(a.ref));
  const AudioBuffer buffer = load_wav(a.audio);

  const BenchmarkTable table = benchmark(buffer, ref, methods, cfg.tolerance_s, a.repeats);
  std::ostringstream csv;
  write_benchmark_csv(csv, table);
  emit(a.out, out, csv.str());

  std::ostringstream ss;
  for (const BenchmarkRow& row : table.rows) {
    if (row.error) ss << row.method << " failed: " << *row.error << '\n';
  }
  if (table.pitch_speedup) {
    ss << std::fixed << std::setprecision(2)
       << "speedup (bic-grow time / pitch time): " << *table.pitch_speedup << '\n';
  }
  err << ss.str();
}

void cmd_synth(const SynthArgs& a, const RunConfig& cfg, std::ostream& err) {
  SynthSpec spec;
  spec.sample_rate_hz = a.sample_rate;
  spec.durations_s = a.durations;
  if (spec.durations_s.empty()) spec.durations_s.assign(a.speakers, a.segment_s);
  spec.f0_hz = a.f0;
  spec.envelope_seeds = a.envelope_seeds;
  spec.noise = a.noise;
  spec.seed = cfg.seed;
  const SynthResult r = synthesize(spec);

  std::filesystem::path truth = a.truth;
  if (truth.empty()) truth = std::filesystem::path(a.out).replace_extension(".txt");
  save_wav(a.out, r.buffer);
  write_change_points(truth, r.truth);
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(3) << "wrote " << a.out << " ("
     << r.buffer.duration_s() << " s) and " << truth.string() << " ("
     << r.truth.size() << " boundaries)\n";
  err << ss.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Speaker change detection by pitch jumps or BIC.", "spkseg"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  bool dry_run = false;
  app.add_option("--config", config_path, "key = value settings file");
  app.add_flag("--dry-run", dry_run, "print the resolved settings as JSON and exit");
  std::map<std::string, std::string> flag_values;
  for (const std::string& key : config_keys()) {
    app.add_option(flag_for(key), flag_values[key], "setting '" + key + "'");
  }

  PitchArgs pitch_args;
  auto* pitch = app.add_subcommand("pitch", "write a pitch track as TSV");
  pitch->add_option("audio", pitch_args.audio, "16-bit PCM WAV file")->required();
  pitch->add_option("--out", pitch_args.out, "output file (default stdout)");

  SegmentArgs seg_args;
  auto* seg = app.add_subcommand("segment", "detect speaker change points");
  seg->add_option("audio", seg_args.audio, "16-bit PCM WAV file")->required();
  seg->add_option("--out", seg_args.out, "change-point file");
  seg->add_flag("--json", seg_args.json, "print the full result as JSON");

  EvaluateArgs eval_args;
  auto* ev = app.add_subcommand("evaluate", "score hypothesis against reference");
  ev->add_option("reference", eval_args.ref, "reference change-point file")->required();
  ev->add_option("hypothesis", eval_args.hyp, "hypothesis change-point file")->required();
  ev->add_flag("--json", eval_args.json, "print the report as JSON");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "compare methods on one recording");
  bench->add_option("audio", bench_args.audio, "16-bit PCM WAV file")->required();
  bench->add_option("reference", bench_args.ref, "reference change-point file")->required();
  bench->add_option("--methods", bench_args.methods, "comma-separated method names")
      ->capture_default_str();
  bench->add_option("--repeats", bench_args.repeats, "runs per method; median time is kept")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_args.out, "CSV file (default stdout)");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "generate a synthetic multi-speaker WAV");
  synth->add_option("--durations", synth_args.durations, "segment lengths in seconds")
      ->delimiter(',');
  synth->add_option("--speakers", synth_args.speakers, "segment count when --durations is absent")
      ->capture_default_str();
  synth->add_option("--segment-s", synth_args.segment_s, "segment length when --durations is absent")
      ->capture_default_str();
  synth->add_option("--f0", synth_args.f0, "per-segment f0 in Hz")->delimiter(',');
  synth->add_option("--envelope-seeds", synth_args.envelope_seeds, "per-segment envelope seeds")
      ->delimiter(',');
  synth->add_option("--noise", synth_args.noise, "white noise standard deviation")
      ->capture_default_str();
  synth->add_option("--sample-rate", synth_args.sample_rate, "Hz")->capture_default_str();
  synth->add_option("--out", synth_args.out, "output WAV file")->required();
  synth->add_option("--truth", synth_args.truth, "ground-truth file (default: WAV path with .txt)");

  std::vector<const char*> argv{"spkseg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::kUsage);
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) load_config(cfg, std::filesystem::path(config_path));
    for (const std::string& key : config_keys()) {
      if (app.get_option(flag_for(key))->count() == 0) continue;
      try {
        apply_setting(cfg, key, flag_values[key]);
      } catch (const FormatError& e) {
        throw UsageError(e.what());
      }
    }
    cfg.validate();
    if (dry_run) {
      out << to_json(cfg) << '\n';
      return 0;
    }

    if (pitch->parsed()) cmd_pitch(pitch_args, cfg, out);
    if (seg->parsed()) cmd_segment(seg_args, cfg, out, err);
    if (ev->parsed()) cmd_evaluate(eval_args, cfg, out);
    if (bench->parsed()) cmd_bench(bench_args, cfg, out, err);
    if (synth->parsed()) cmd_synth(synth_args, cfg, err);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::kPrecondition);
  }
}

}  // namespace spkseg
