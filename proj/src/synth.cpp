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

#include "spkseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace spkseg {

void SynthSpec::validate() const {
  if (sample_rate_hz <= 0) throw PreconditionError("sample rate must be > 0");
  if (durations_s.empty()) throw PreconditionError("synth needs at least one segment");
  for (double d : durations_s) {
    if (!(d > 0.0)) throw PreconditionError("segment durations must be > 0");
  }
  if (!f0_hz.empty() && f0_hz.size() != durations_s.size()) {
    throw PreconditionError("f0 list must match the number of segments");
  }
  for (double f : f0_hz) {
    if (!(f > 0.0)) throw PreconditionError("f0 values must be > 0");
  }
  if (!envelope_seeds.empty() && envelope_seeds.size() != durations_s.size()) {
    throw PreconditionError("envelope seed list must match the number of segments");
  }
  if (n_harmonics < 1) throw PreconditionError("need at least one harmonic");
  if (!(level_rms > 0.0 && level_rms < 0.5)) {
    throw PreconditionError("level_rms must be in (0, 0.5)");
  }
  if (!(noise >= 0.0)) throw PreconditionError("noise must be >= 0");
}

double default_f0(std::size_t index) {
  return (index % 2 == 0 ? 100.0 : 200.0) + 10.0 * static_cast<double>(index / 2);
}

SynthResult synthesize(const SynthSpec& spec) {
  spec.validate();
  const double fs = spec.sample_rate_hz;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> samples;
  std::vector<double> truth;
  double elapsed = 0.0;
  for (std::size_t seg = 0; seg < spec.durations_s.size(); ++seg) {
    const double f0 = spec.f0_hz.empty() ? default_f0(seg) : spec.f0_hz[seg];
    const std::uint64_t env_seed = spec.envelope_seeds.empty()
                                       ? spec.seed * 1000 + seg
                                       : spec.envelope_seeds[seg];
    std::mt19937_64 env_rng(env_seed);
    std::uniform_real_distribution<double> amp_dist(0.2, 1.0);
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
    std::vector<double> amps(spec.n_harmonics);
    std::vector<double> phases(spec.n_harmonics);
    for (std::size_t h = 0; h < spec.n_harmonics; ++h) {
      amps[h] = amp_dist(env_rng);
      phases[h] = phase_dist(env_rng);
    }

    elapsed += spec.durations_s[seg];
    const auto end = static_cast<std::size_t>(std::llround(fs * elapsed));
    const std::size_t begin = samples.size();
    std::vector<double> voice(end > begin ? end - begin : 0);
    for (std::size_t i = 0; i < voice.size(); ++i) {
      const double t = static_cast<double>(begin + i) / fs;
      double v = 0.0;
      for (std::size_t h = 0; h < spec.n_harmonics; ++h) {
        const double f = f0 * static_cast<double>(h + 1);
        if (f >= 0.5 * fs) break;
        v += amps[h] * std::sin(2.0 * std::numbers::pi * f * t + phases[h]);
      }
      voice[i] = v;
    }
    double energy = 0.0;
    for (double v : voice) energy += v * v;
    const double rms = voice.empty() ? 0.0 : std::sqrt(energy / voice.size());
    const double gain = rms > 0.0 ? spec.level_rms / rms : 0.0;
    for (double v : voice) {
      const double x = std::clamp(gain * v + spec.noise * gauss(rng), -1.0, 1.0);
      // Snap to the 16-bit grid that save_wav uses.
      samples.push_back(std::clamp(std::round(x * 32768.0), -32768.0, 32767.0) / 32768.0);
    }
    if (seg + 1 < spec.durations_s.size()) truth.push_back(end / fs);
  }
  return {AudioBuffer(std::move(samples), spec.sample_rate_hz),
          ChangePointSet(std::move(truth))};
}

}  // namespace spkseg
