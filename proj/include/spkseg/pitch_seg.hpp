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

// Pitch-jump speaker segmentation.
//
// pitch track -> |frame-to-frame pitch difference| -> normalize to [0, 1]
// and apply c * x^gamma -> keep peaks above threshold_coef * max ->
// confirm each peak with a short dBIC test on MFCC features.

#ifndef SPKSEG_PITCH_SEG_HPP_
#define SPKSEG_PITCH_SEG_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spkseg/audio.hpp"
#include "spkseg/eval.hpp"
#include "spkseg/features.hpp"
#include "spkseg/pitch.hpp"

namespace spkseg {

struct PitchSegConfig {
  double threshold_coef = 0.7;
  double gamma = 0.3;
  double gamma_c = 1.0;
  double verify_window_s = 0.4;  // total span, centered on the candidate
  double lambda = 1.0;
  double min_gap_s = 0.5;
  double reg_epsilon = 1e-6;
  PitchConfig pitch;
  MfccConfig mfcc;
  // Accept every candidate without the dBIC check. For tests.
  bool skip_verification = false;

  void validate() const;
};

// |p[n+1] - p[n]|, or 0 when either frame is unvoiced. Throws
// PreconditionError for fewer than 2 frames.
std::vector<double> pitch_diff(const PitchTrack& track);

// x / max(x), then c * x^gamma. All-zero input stays zero.
std::vector<double> gamma_correct(std::span<const double> diff, double c,
                                  double gamma);

struct Candidate {
  double time_s = 0.0;
  double strength = 0.0;
};

// times holds one entry per frame (corrected.size() + 1 entries); index n
// of |corrected| sits halfway between times[n] and times[n + 1]. Values
// strictly above threshold_coef * max form runs; each run yields its peak,
// then peaks closer than min_gap_s keep only the stronger one.
std::vector<Candidate> candidates(std::span<const double> corrected,
                                  std::span<const double> times,
                                  double threshold_coef, double min_gap_s);

struct SegmentationResult {
  ChangePointSet change_points;
  std::vector<std::pair<double, double>> segments;  // tile [0, duration]
  std::vector<double> scores;                       // dBIC per change point
  std::size_t candidates_examined = 0;
  std::size_t candidates_rejected = 0;
  double wall_time_s = 0.0;
  double duration_s = 0.0;
};

// Throws PreconditionError unless the buffer is longer than verify_window_s.
SegmentationResult segment(const AudioBuffer& buffer, const PitchSegConfig& cfg);

// Contiguous [start, end) intervals between consecutive boundaries.
std::vector<std::pair<double, double>> segments_from(const ChangePointSet& points,
                                                     double duration_s);

std::string to_json(const SegmentationResult& result);

}  // namespace spkseg

#endif  // SPKSEG_PITCH_SEG_HPP_
