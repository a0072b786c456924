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

// Frame-level fundamental frequency estimation.
//
// Three detectors share one lag search range [ceil(fs/max_hz),
// floor(fs/min_hz)]:
//
//   ACF       argmax of the autocorrelation R(tau); voiced when
//             R(tau*)/R(0) >= voicing_threshold.
//   AMDF      first local minimum of the overlap-averaged magnitude
//             difference that dips below half the in-range maximum (falls
//             back to the global minimum); voiced when
//             1 - AMDF(tau*)/mean(AMDF) >= voicing_threshold.
//   CEPSTRAL  argmax of the real cepstrum over the quefrency range; voiced
//             when the peak is at least (1 + voicing_threshold) times the
//             mean absolute cepstrum in range and the frame is periodic at
//             tau* (R(tau*)/R(0) >= voicing_threshold).
//
// Unvoiced frames report 0 Hz. Ties go to the smallest lag.

#ifndef SPKSEG_PITCH_HPP_
#define SPKSEG_PITCH_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spkseg/audio.hpp"

namespace spkseg {

enum class PitchMethod { kAcf, kAmdf, kCepstral };

std::string to_string(PitchMethod method);
// Accepts "acf", "amdf", "cepstral" (case-insensitive).
PitchMethod parse_pitch_method(const std::string& name);

struct PitchConfig {
  PitchMethod method = PitchMethod::kAmdf;
  double min_hz = 60.0;
  double max_hz = 400.0;
  double frame_len_s = 0.030;
  double hop_s = 0.010;
  double voicing_threshold = 0.3;

  // Range checks that do not depend on the sample rate.
  void validate() const;
  // Full check, including that the longest lag fits in one frame.
  void validate(int sample_rate_hz) const;

  std::size_t frame_len_samples(int sample_rate_hz) const;
  std::size_t hop_samples(int sample_rate_hz) const;
};

struct LagRange {
  std::size_t min_lag = 0;
  std::size_t max_lag = 0;
};

LagRange lag_range(int sample_rate_hz, double min_hz, double max_hz);

// R(tau) = sum_{n=0}^{N-1-tau} s(n) s(n+tau), tau = 0..N-1.
std::vector<double> acf(std::span<const double> frame);

// AMDF(tau) = sum over overlapping samples of |s(i) - s(i+tau)|,
// tau = 0..N-1. Unnormalized.
std::vector<double> amdf(std::span<const double> frame);

// Real cepstrum: inverse DFT of log(|DFT(frame)| + 1e-10). The transform
// size is the next power of two >= 2N, so every lag below N maps to a
// distinct quefrency bin. Returns the full transform-length sequence.
std::vector<double> cepstrum(std::span<const double> frame);

// Pitch in Hz for one frame, or 0.0 when unvoiced.
// Throws PreconditionError when the frame is shorter than max lag + 1.
double pitch_frame(std::span<const double> frame, int sample_rate_hz,
                   const PitchConfig& cfg);

struct PitchTrack {
  std::vector<double> times;     // frame start, seconds
  std::vector<double> pitch_hz;  // 0.0 = unvoiced
  double frame_len_s = 0.0;
};

// Throws PreconditionError if the buffer is shorter than one frame.
PitchTrack pitch_track(const AudioBuffer& buffer, const PitchConfig& cfg);

// Two columns with a "time_s\tpitch_hz" header.
void write_pitch_tsv(std::ostream& out, const PitchTrack& track);

}  // namespace spkseg

#endif  // SPKSEG_PITCH_HPP_
