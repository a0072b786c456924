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

#include "spkseg/audio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace spkseg {

namespace {

constexpr double kPcm16Scale = 32768.0;
constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

WavError malformed(const std::filesystem::path& path, const std::string& why) {
  return WavError(WavError::Code::kMalformedHeader,
                  path.string() + ": malformed WAV: " + why);
}

}  // namespace

AudioBuffer::AudioBuffer(std::vector<double> samples, int sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (sample_rate_hz_ <= 0) {
    throw PreconditionError("sample rate must be positive");
  }
  for (double s : samples_) {
    if (!(s >= -1.0 && s <= 1.0)) {
      throw PreconditionError("audio sample outside [-1, 1]");
    }
  }
}

AudioBuffer load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw WavError(WavError::Code::kMissingFile,
                   "cannot open audio file: " + path.string());
  }
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw malformed(path, "missing RIFF/WAVE signature");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t len = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (len < 16 || len > avail) throw malformed(path, "short fmt chunk");
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      if (format == kFormatExtensible) {
        // The sub-format GUID starts with the plain format tag.
        if (len < 40) throw malformed(path, "short extensible fmt chunk");
        format = read_u16(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      // Some writers leave the size unset when streaming; use what is there.
      data_len = std::min<std::size_t>(len, avail);
      break;
    }
    pos = body + len + (len & 1u);
  }

  if (!have_fmt) throw malformed(path, "no fmt chunk");
  if (data == nullptr) throw malformed(path, "no data chunk");
  if (channels == 0) throw malformed(path, "zero channels");
  if (rate == 0) throw malformed(path, "zero sample rate");
  if (format != kFormatPcm) {
    throw WavError(WavError::Code::kUnsupportedEncoding,
                   path.string() + ": unsupported WAV encoding (format tag " +
                       std::to_string(format) + "), only PCM is supported");
  }
  if (bits != 16) {
    throw WavError(WavError::Code::kUnsupportedEncoding,
                   path.string() + ": unsupported bit depth " +
                       std::to_string(bits) + ", only 16-bit PCM is supported");
  }

  const std::size_t frame_bytes = 2u * channels;
  const std::size_t n = data_len / frame_bytes;
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const auto v = static_cast<std::int16_t>(
          read_u16(data + i * frame_bytes + 2 * c));
      acc += v / kPcm16Scale;
    }
    samples[i] = channels == 1 ? acc : acc / channels;
  }
  return AudioBuffer(std::move(samples), static_cast<int>(rate));
}

void save_wav(const std::filesystem::path& path, const AudioBuffer& buffer) {
  const std::uint32_t data_len = static_cast<std::uint32_t>(buffer.size() * 2);
  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  put_u32(out, 36 + data_len);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate_hz()));
  put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate_hz()) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_len);
  for (double s : buffer.samples()) {
    const double scaled = std::clamp(std::round(s * kPcm16Scale), -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write audio file: " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

std::size_t FramePlan::frame_count(std::size_t num_samples) const {
  if (window_len == 0 || hop == 0 || num_samples < window_len) return 0;
  return (num_samples - window_len) / hop + 1;
}

std::vector<Frame> frames(const AudioBuffer& buffer, const FramePlan& plan) {
  if (plan.window_len == 0 || plan.hop == 0) {
    throw PreconditionError("frame plan needs window_len >= 1 and hop >= 1");
  }
  const std::size_t count = plan.frame_count(buffer.size());
  std::vector<Frame> out;
  out.reserve(count);
  const auto all = buffer.samples();
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back({all.subspan(k * plan.hop, plan.window_len),
                   static_cast<double>(k * plan.hop) / buffer.sample_rate_hz()});
  }
  return out;
}

}  // namespace spkseg
