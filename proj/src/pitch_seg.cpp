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

#include "spkseg/pitch_seg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "json.hpp"
#include "spkseg/bic.hpp"

namespace spkseg {

void PitchSegConfig::validate() const {
  if (!(threshold_coef > 0.0 && threshold_coef <= 1.0)) {
    throw PreconditionError("threshold_coef must be in (0, 1]");
  }
  if (!(gamma > 0.0)) throw PreconditionError("gamma must be > 0");
  if (!(gamma_c > 0.0)) throw PreconditionError("gamma_c must be > 0");
  if (!(verify_window_s > 0.0)) throw PreconditionError("verify_window_s must be > 0");
  if (!(lambda >= 0.0)) throw PreconditionError("lambda must be >= 0");
  if (!(min_gap_s >= 0.0)) throw PreconditionError("min_gap_s must be >= 0");
  if (!(reg_epsilon > 0.0)) throw PreconditionError("reg_epsilon must be > 0");
  pitch.validate();
  mfcc.validate();
}

std::vector<double> pitch_diff(const PitchTrack& track) {
  const auto& p = track.pitch_hz;
  if (p.size() < 2) throw PreconditionError("pitch difference needs at least 2 frames");
  std::vector<double> out(p.size() - 1, 0.0);
  for (std::size_t n = 0; n + 1 < p.size(); ++n) {
    if (p[n] > 0.0 && p[n + 1] > 0.0) out[n] = std::abs(p[n + 1] - p[n]);
  }
  return out;
}

std::vector<double> gamma_correct(std::span<const double> diff, double c,
                                  double gamma) {
  if (!(c > 0.0) || !(gamma > 0.0)) {
    throw PreconditionError("gamma correction needs c > 0 and gamma > 0");
  }
  std::vector<double> out(diff.begin(), diff.end());
  const double peak = out.empty() ? 0.0 : *std::max_element(out.begin(), out.end());
  if (!(peak > 0.0)) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }
  for (double& x : out) x = c * std::pow(std::max(x, 0.0) / peak, gamma);
  return out;
}

std::vector<Candidate> candidates(std::span<const double> corrected,
                                  std::span<const double> times,
                                  double threshold_coef, double min_gap_s) {
  if (!(threshold_coef > 0.0 && threshold_coef <= 1.0)) {
    throw PreconditionError("threshold_coef must be in (0, 1]");
  }
  if (times.size() != corrected.size() + 1) {
    throw PreconditionError("candidates needs one more time than difference values");
  }
  std::vector<Candidate> peaks;
  if (corrected.empty()) return peaks;
  const auto [lo, hi] = std::minmax_element(corrected.begin(), corrected.end());
  if (*lo == *hi) return peaks;  // flat: nothing stands out
  const double theta = threshold_coef * *hi;

  for (std::size_t n = 0; n < corrected.size();) {
    if (!(corrected[n] > theta)) {
      ++n;
      continue;
    }
    std::size_t best = n;
    for (; n < corrected.size() && corrected[n] > theta; ++n) {
      if (corrected[n] > corrected[best]) best = n;
    }
    peaks.push_back({0.5 * (times[best] + times[best + 1]), corrected[best]});
  }

  // Strongest first; a peak survives if nothing already kept is too close.
  std::vector<std::size_t> order(peaks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return peaks[a].strength > peaks[b].strength;
  });
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    const bool clear = std::none_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return std::abs(peaks[i].time_s - peaks[k].time_s) < min_gap_s;
    });
    if (clear) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<Candidate> out;
  out.reserve(kept.size());
  for (std::size_t i : kept) out.push_back(peaks[i]);
  return out;
}

std::vector<std::pair<double, double>> segments_from(const ChangePointSet& points,
                                                     double duration_s) {
  std::vector<std::pair<double, double>> out;
  double start = 0.0;
  for (double t : points.times()) {
    if (t <= start || t >= duration_s) continue;
    out.emplace_back(start, t);
    start = t;
  }
  out.emplace_back(start, duration_s);
  return out;
}

SegmentationResult segment(const AudioBuffer& buffer, const PitchSegConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  cfg.validate();
  if (!(buffer.duration_s() > cfg.verify_window_s)) {
    throw PreconditionError("audio must be longer than verify_window_s");
  }

  const PitchTrack track = pitch_track(buffer, cfg.pitch);
  const std::vector<double> corrected =
      gamma_correct(pitch_diff(track), cfg.gamma_c, cfg.gamma);
  std::vector<double> centers(track.times.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    centers[i] = track.times[i] + 0.5 * track.frame_len_s;
  }
  const auto cands = candidates(corrected, centers, cfg.threshold_coef, cfg.min_gap_s);

  SegmentationResult result;
  result.duration_s = buffer.duration_s();
  result.candidates_examined = cands.size();

  std::vector<double> accepted;
  if (cfg.skip_verification) {
    for (const Candidate& c : cands) {
      accepted.push_back(c.time_s);
      result.scores.push_back(c.strength);
    }
  } else if (!cands.empty()) {
    const FeatureMatrix features = mfcc(buffer, cfg.mfcc);
    for (const Candidate& c : cands) {
      const Verification v = verify_change(features, c.time_s, cfg.verify_window_s,
                                           cfg.lambda, cfg.reg_epsilon);
      if (v.accepted) {
        accepted.push_back(c.time_s);
        result.scores.push_back(v.score);
      }
    }
  }
  result.candidates_rejected = cands.size() - accepted.size();
  result.change_points = ChangePointSet(std::move(accepted));
  result.segments = segments_from(result.change_points, result.duration_s);
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::string to_json(const SegmentationResult& result) {
  nlohmann::ordered_json j;
  auto round3 = [](double x) { return std::round(x * 1000.0) / 1000.0; };
  nlohmann::ordered_json cps = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < result.change_points.size(); ++i) {
    nlohmann::ordered_json cp;
    cp["time_s"] = round3(result.change_points.times()[i]);
    if (i < result.scores.size()) cp["score"] = result.scores[i];
    cps.push_back(cp);
  }
  j["change_points"] = cps;
  nlohmann::ordered_json segs = nlohmann::ordered_json::array();
  for (const auto& [a, b] : result.segments) segs.push_back({round3(a), round3(b)});
  j["segments"] = segs;
  j["candidates_examined"] = result.candidates_examined;
  j["candidates_rejected"] = result.candidates_rejected;
  j["duration_s"] = round3(result.duration_s);
  j["wall_time_s"] = result.wall_time_s;
  return j.dump(2);
}

}  // namespace spkseg
