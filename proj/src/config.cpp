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

#include "spkseg/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <fstream>
#include <functional>
#include <istream>

#include "json.hpp"

namespace spkseg {

namespace {

using Json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* expected) {
  throw FormatError("setting '" + key + "': expected " + expected + ", got '" +
                    value + "'");
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    bad_value(key, v, "a non-negative integer");
  }
  return out;
}

std::size_t to_size(const std::string& key, const std::string& v) {
  return static_cast<std::size_t>(to_u64(key, v));
}

bool to_bool(const std::string& key, const std::string& v) {
  std::string s = v;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  bad_value(key, v, "true or false");
}

struct Entry {
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<Json(const RunConfig&)> get;
};

#define SPKSEG_DOUBLE(name, field)                                              \
  Entry {                                                                       \
    name, [](RunConfig& c, const std::string& v) { c.field = to_double(name, v); }, \
        [](const RunConfig& c) { return Json(c.field); }                        \
  }
#define SPKSEG_SIZE(name, field)                                                \
  Entry {                                                                       \
    name, [](RunConfig& c, const std::string& v) { c.field = to_size(name, v); }, \
        [](const RunConfig& c) { return Json(c.field); }                        \
  }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {"pitch_method",
       [](RunConfig& c, const std::string& v) {
         try {
           c.seg.pitch.method = parse_pitch_method(v);
         } catch (const UsageError&) {
           bad_value("pitch_method", v, "acf, amdf or cepstral");
         }
       },
       [](const RunConfig& c) { return Json(to_string(c.seg.pitch.method)); }},
      SPKSEG_DOUBLE("min_hz", seg.pitch.min_hz),
      SPKSEG_DOUBLE("max_hz", seg.pitch.max_hz),
      SPKSEG_DOUBLE("frame_len_s", seg.pitch.frame_len_s),
      SPKSEG_DOUBLE("hop_s", seg.pitch.hop_s),
      SPKSEG_DOUBLE("voicing_threshold", seg.pitch.voicing_threshold),
      SPKSEG_SIZE("mfcc_window", seg.mfcc.window_len),
      SPKSEG_SIZE("mfcc_overlap", seg.mfcc.overlap),
      SPKSEG_SIZE("n_coeffs", seg.mfcc.n_coeffs),
      SPKSEG_SIZE("n_mel_filters", seg.mfcc.n_mel_filters),
      {"include_c0",
       [](RunConfig& c, const std::string& v) {
         c.seg.mfcc.include_c0 = to_bool("include_c0", v);
       },
       [](const RunConfig& c) { return Json(c.seg.mfcc.include_c0); }},
      SPKSEG_DOUBLE("bic_lambda", bic.lambda),
      {"reg_epsilon",
       [](RunConfig& c, const std::string& v) {
         c.bic.reg_epsilon = c.seg.reg_epsilon = to_double("reg_epsilon", v);
       },
       [](const RunConfig& c) { return Json(c.bic.reg_epsilon); }},
      SPKSEG_SIZE("n_ini", bic.n_ini),
      SPKSEG_SIZE("n_g", bic.n_g),
      SPKSEG_SIZE("n_max", bic.n_max),
      SPKSEG_SIZE("n_s", bic.n_s),
      SPKSEG_SIZE("fixed_window", bic.fixed_window),
      SPKSEG_DOUBLE("threshold_coef", seg.threshold_coef),
      SPKSEG_DOUBLE("gamma", seg.gamma),
      SPKSEG_DOUBLE("gamma_c", seg.gamma_c),
      SPKSEG_DOUBLE("verify_window_s", seg.verify_window_s),
      SPKSEG_DOUBLE("seg_lambda", seg.lambda),
      SPKSEG_DOUBLE("min_gap_s", seg.min_gap_s),
      {"method", [](RunConfig& c, const std::string& v) { c.method = v; },
       [](const RunConfig& c) { return Json(c.method); }},
      SPKSEG_DOUBLE("tolerance", tolerance_s),
      {"seed", [](RunConfig& c, const std::string& v) { c.seed = to_u64("seed", v); },
       [](const RunConfig& c) { return Json(c.seed); }},
  };
  return table;
}

#undef SPKSEG_DOUBLE
#undef SPKSEG_SIZE

}  // namespace

void RunConfig::validate() const {
  check_method(method);
  seg.validate();
  if (!(tolerance_s >= 0.0)) throw PreconditionError("tolerance must be >= 0");
  bic.validate(seg.mfcc.dim());
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Entry& e : entries()) k.push_back(e.key);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = entries();
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const Entry& e) { return e.key == key; });
  if (it == table.end()) throw UsageError("unknown setting '" + key + "'");
  it->set(cfg, trim(value));
}

void load_config(RunConfig& cfg, std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    try {
      apply_setting(cfg, key, line.substr(eq + 1));
    } catch (const UsageError& e) {
      throw FormatError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void load_config(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  load_config(cfg, in);
}

std::string to_json(const RunConfig& cfg) {
  Json j;
  for (const Entry& e : entries()) j[e.key] = e.get(cfg);
  return j.dump(2);
}

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names = {"pitch", "bic-grow", "bic-fixed"};
  return names;
}

void check_method(const std::string& method) {
  const auto& names = method_names();
  if (std::find(names.begin(), names.end(), method) == names.end()) {
    throw UsageError("unknown method '" + method +
                     "' (expected pitch, bic-grow or bic-fixed)");
  }
}

SegmentationResult run_method(const AudioBuffer& buffer, const RunConfig& cfg,
                              const std::string& method) {
  check_method(method);
  if (method == "pitch") return segment(buffer, cfg.seg);

  const auto t0 = std::chrono::steady_clock::now();
  const FeatureMatrix features = mfcc(buffer, cfg.seg.mfcc);
  const std::vector<ChangePoint> points = method == "bic-grow"
                                              ? detect_growing(features, cfg.bic)
                                              : detect_fixed(features, cfg.bic);
  SegmentationResult r;
  std::vector<double> times;
  for (const ChangePoint& p : points) {
    times.push_back(p.time_s);
    r.scores.push_back(p.score);
  }
  r.change_points = ChangePointSet(std::move(times));
  r.candidates_examined = points.size();
  r.duration_s = buffer.duration_s();
  r.segments = segments_from(r.change_points, r.duration_s);
  r.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Segmenter make_segmenter(const RunConfig& cfg, const std::string& method) {
  check_method(method);
  return {method, [cfg, method](const AudioBuffer& buffer) {
            return run_method(buffer, cfg, method).change_points.times();
          }};
}

}  // namespace spkseg
