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

#ifndef SPKSEG_FEATURES_HPP_
#define SPKSEG_FEATURES_HPP_

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "spkseg/audio.hpp"

namespace spkseg {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct MfccConfig {
  std::size_t window_len = 200;  // samples
  std::size_t overlap = 120;     // samples
  std::size_t n_coeffs = 13;
  std::size_t n_mel_filters = 26;
  bool include_c0 = true;  // when false, c1..c_{n_coeffs} are kept instead

  std::size_t hop() const { return window_len - overlap; }
  std::size_t dim() const { return n_coeffs; }
  void validate() const;
};

// One row per analysis frame.
struct FeatureMatrix {
  RowMatrix vectors;
  std::vector<double> times;  // frame start, seconds
  double hop_s = 0.0;
  double frame_len_s = 0.0;

  std::size_t rows() const { return static_cast<std::size_t>(vectors.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
  double center_time(std::size_t row) const { return times[row] + 0.5 * frame_len_s; }
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Hamming window -> |DFT| (next power of two >= window_len) -> triangular
// mel filter bank spanning 0..fs/2 -> log(energy + 1e-10) -> orthonormal
// DCT-II. Throws PreconditionError if the buffer is shorter than one window.
FeatureMatrix mfcc(const AudioBuffer& buffer, const MfccConfig& cfg);

// Time column followed by d coefficient columns, tab separated.
void write_features_tsv(std::ostream& out, const FeatureMatrix& features);

}  // namespace spkseg

#endif  // SPKSEG_FEATURES_HPP_
