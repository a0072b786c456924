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

// Signal builders and scratch files shared by the test binaries.

#ifndef SPKSEG_TESTS_FIXTURES_HPP_
#define SPKSEG_TESTS_FIXTURES_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "spkseg/features.hpp"

namespace fixture {

inline std::vector<double> sine(double hz, int fs, std::size_t n, double amp = 0.5,
                                double phase = 0.0) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = amp * std::sin(2.0 * std::numbers::pi * hz * i / fs + phase);
  }
  return s;
}

inline std::vector<double> sawtooth(double hz, int fs, std::size_t n, double amp = 0.5) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ph = hz * i / fs;
    s[i] = amp * (2.0 * (ph - std::floor(ph)) - 1.0);
  }
  return s;
}

// Sum of equal-amplitude harmonics below 0.45 fs: a band-limited pulse train.
inline std::vector<double> pulse_train(double hz, int fs, std::size_t n, double amp = 0.5) {
  std::vector<double> s(n, 0.0);
  std::size_t harmonics = 0;
  for (std::size_t h = 1; h * hz < 0.45 * fs; ++h) {
    ++harmonics;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] += std::cos(2.0 * std::numbers::pi * h * hz * i / fs);
    }
  }
  for (double& v : s) v *= amp / static_cast<double>(harmonics);
  return s;
}

inline std::vector<double> noise(std::size_t n, double sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sd);
  std::vector<double> s(n);
  for (double& v : s) v = g(rng);
  return s;
}

// Rows drawn from N(mean * 1, I), times on a 10 ms grid.
inline spkseg::FeatureMatrix gaussian_rows(std::size_t n, std::size_t d,
                                           std::uint64_t seed,
                                           std::vector<std::pair<std::size_t, double>>
                                               mean_from_row = {{0, 0.0}}) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  spkseg::FeatureMatrix f;
  f.vectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  f.hop_s = 0.01;
  f.frame_len_s = 0.025;
  for (std::size_t r = 0; r < n; ++r) {
    double mean = 0.0;
    for (const auto& [row, m] : mean_from_row) {
      if (r >= row) mean = m;
    }
    for (std::size_t j = 0; j < d; ++j) {
      f.vectors(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = mean + g(rng);
    }
    f.times.push_back(static_cast<double>(r) * f.hop_s);
  }
  return f;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("spkseg_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::trunc) << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Hand-built RIFF/WAVE file with arbitrary format fields.
inline void write_raw_wav(const std::filesystem::path& p, std::uint16_t format,
                          std::uint16_t channels, std::uint32_t rate,
                          std::uint16_t bits, const std::vector<std::uint8_t>& data) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) f.put(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  auto u16 = [&](std::uint16_t v) {
    f.put(static_cast<char>(v & 0xff));
    f.put(static_cast<char>(v >> 8));
  };
  f.write("RIFF", 4);
  u32(static_cast<std::uint32_t>(36 + data.size()));
  f.write("WAVEfmt ", 8);
  u32(16);
  u16(format);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(static_cast<std::uint16_t>(channels * bits / 8));
  u16(bits);
  f.write("data", 4);
  u32(static_cast<std::uint32_t>(data.size()));
  f.write(reinterpret_cast<const char*>(data.data()),
          static_cast<std::streamsize>(data.size()));
}

inline std::vector<std::uint8_t> pcm16(const std::vector<std::int16_t>& v) {
  std::vector<std::uint8_t> out;
  for (std::int16_t s : v) {
    const auto u = static_cast<std::uint16_t>(s);
    out.push_back(static_cast<std::uint8_t>(u & 0xff));
    out.push_back(static_cast<std::uint8_t>(u >> 8));
  }
  return out;
}

}  // namespace fixture

#endif  // SPKSEG_TESTS_FIXTURES_HPP_
