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

// Audio buffers, 16-bit PCM WAV I/O and analysis framing.

#ifndef SPKSEG_AUDIO_HPP_
#define SPKSEG_AUDIO_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "spkseg/error.hpp"

namespace spkseg {

// Mono signal with amplitudes in [-1, 1]. Immutable after construction.
class AudioBuffer {
 public:
  AudioBuffer() = default;
  // Throws PreconditionError if sample_rate_hz <= 0 or any sample is
  // outside [-1, 1] (or not finite).
  AudioBuffer(std::vector<double> samples, int sample_rate_hz);

  std::span<const double> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  int sample_rate_hz() const { return sample_rate_hz_; }
  double duration_s() const {
    return sample_rate_hz_ > 0
               ? static_cast<double>(samples_.size()) / sample_rate_hz_
               : 0.0;
  }

 private:
  std::vector<double> samples_;
  int sample_rate_hz_ = 0;
};

class WavError : public Error {
 public:
  enum class Code { kMissingFile, kMalformedHeader, kUnsupportedEncoding };

  WavError(Code code, const std::string& what)
      : Error(code == Code::kMissingFile ? ErrorKind::kIo : ErrorKind::kFormat,
              what),
        code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Reads a RIFF/WAVE PCM 16-bit file. Samples are divided by 32768 and
// multi-channel input is averaged to mono.
AudioBuffer load_wav(const std::filesystem::path& path);

// Writes mono 16-bit PCM. Amplitudes are scaled by 32768, rounded and
// clamped to the int16 range, so load_wav(save_wav(x)) is exact for any x
// that is already a multiple of 1/32768.
void save_wav(const std::filesystem::path& path, const AudioBuffer& buffer);

struct FramePlan {
  std::size_t window_len = 0;
  std::size_t hop = 0;

  // 0 if fewer than window_len samples, else floor((n - window_len)/hop) + 1.
  std::size_t frame_count(std::size_t num_samples) const;
};

struct Frame {
  std::span<const double> samples;
  double start_s = 0.0;
};

// Frames are views into |buffer| and must not outlive it. Tail samples that
// do not fill a full window are dropped.
std::vector<Frame> frames(const AudioBuffer& buffer, const FramePlan& plan);

}  // namespace spkseg

#endif  // SPKSEG_AUDIO_HPP_
