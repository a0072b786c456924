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

// Synthetic multi-speaker recordings. Each speaker is a sum of harmonics
// of its own f0 with a seeded random amplitude profile, so speakers differ
// in both pitch and spectral envelope. White noise is added on top.

#ifndef SPKSEG_SYNTH_HPP_
#define SPKSEG_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spkseg/audio.hpp"
#include "spkseg/eval.hpp"

namespace spkseg {

struct SynthSpec {
  int sample_rate_hz = 8000;
  std::vector<double> durations_s;              // one entry per segment
  std::vector<double> f0_hz;                    // empty: default_f0(i)
  std::vector<std::uint64_t> envelope_seeds;    // empty: seed * 1000 + i
  std::size_t n_harmonics = 8;
  double level_rms = 0.15;  // speech RMS before noise
  double noise = 0.01;      // white noise standard deviation
  std::uint64_t seed = 42;  // noise and phase generator

  void validate() const;
};

struct SynthResult {
  AudioBuffer buffer;
  ChangePointSet truth;  // segment boundaries, excluding 0 and the end
};

// 100, 200, 110, 210, 120, 220, ... Hz.
double default_f0(std::size_t index);

// Deterministic given the spec. Samples are quantized to the 16-bit grid so
// the in-memory buffer equals what save_wav writes.
SynthResult synthesize(const SynthSpec& spec);

}  // namespace spkseg

#endif  // SPKSEG_SYNTH_HPP_
