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

#include "spkseg/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "fft.hpp"

namespace spkseg {

namespace {

constexpr double kLogFloor = 1e-10;

// Rows are filters, columns are DFT bins 0..n_fft/2.
Eigen::MatrixXd mel_filter_bank(std::size_t n_filters, std::size_t n_fft,
                                int sample_rate_hz) {
  const std::size_t bins = n_fft / 2 + 1;
  const double nyquist = 0.5 * sample_rate_hz;
  const double mel_hi = hz_to_mel(nyquist);
  std::vector<double> edges(n_filters + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_hi * static_cast<double>(i) /
                         static_cast<double>(n_filters + 1));
  }
  Eigen::MatrixXd bank = Eigen::MatrixXd::Zero(n_filters, bins);
  for (std::size_t m = 0; m < n_filters; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate_hz / n_fft;
      if (f > left && f < right) {
        bank(m, k) = f <= center ? (f - left) / (center - left)
                                 : (right - f) / (right - center);
      }
    }
  }
  return bank;
}

// Orthonormal DCT-II rows for coefficients [first, first + count).
Eigen::MatrixXd dct_matrix(std::size_t first, std::size_t count,
                           std::size_t n_filters) {
  Eigen::MatrixXd dct(count, n_filters);
  const double m = static_cast<double>(n_filters);
  for (std::size_t r = 0; r < count; ++r) {
    const std::size_t k = first + r;
    const double scale = k == 0 ? std::sqrt(1.0 / m) : std::sqrt(2.0 / m);
    for (std::size_t j = 0; j < n_filters; ++j) {
      dct(r, j) = scale * std::cos(std::numbers::pi * k * (j + 0.5) / m);
    }
  }
  return dct;
}

}  // namespace

void MfccConfig::validate() const {
  if (window_len == 0) throw PreconditionError("mfcc window_len must be >= 1");
  if (overlap >= window_len) {
    throw PreconditionError("mfcc overlap must be smaller than window_len");
  }
  if (n_coeffs < 1 || n_coeffs > n_mel_filters) {
    throw PreconditionError("mfcc needs 1 <= n_coeffs <= n_mel_filters");
  }
  if (!include_c0 && n_coeffs + 1 > n_mel_filters) {
    throw PreconditionError("mfcc without c0 needs n_coeffs < n_mel_filters");
  }
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

FeatureMatrix mfcc(const AudioBuffer& buffer, const MfccConfig& cfg) {
  cfg.validate();
  if (buffer.size() < cfg.window_len) {
    throw PreconditionError("audio shorter than one MFCC window");
  }
  const int fs = buffer.sample_rate_hz();
  const FramePlan plan{cfg.window_len, cfg.hop()};
  const auto fr = frames(buffer, plan);

  const std::size_t n_fft = internal::next_pow2(cfg.window_len);
  internal::RealFft fft(n_fft);
  const Eigen::MatrixXd bank = mel_filter_bank(cfg.n_mel_filters, n_fft, fs);
  const Eigen::MatrixXd dct =
      dct_matrix(cfg.include_c0 ? 0 : 1, cfg.n_coeffs, cfg.n_mel_filters);

  std::vector<double> window(cfg.window_len);
  for (std::size_t i = 0; i < window.size(); ++i) {
    window[i] = cfg.window_len == 1
                    ? 1.0
                    : 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i /
                                             (cfg.window_len - 1));
  }

  FeatureMatrix out;
  out.vectors.resize(static_cast<Eigen::Index>(fr.size()),
                     static_cast<Eigen::Index>(cfg.n_coeffs));
  out.times.reserve(fr.size());
  out.hop_s = static_cast<double>(plan.hop) / fs;
  out.frame_len_s = static_cast<double>(plan.window_len) / fs;

  std::vector<double> windowed(cfg.window_len);
  Eigen::VectorXd magnitude(n_fft / 2 + 1);
  for (std::size_t r = 0; r < fr.size(); ++r) {
    const auto s = fr[r].samples;
    for (std::size_t i = 0; i < s.size(); ++i) windowed[i] = s[i] * window[i];
    const auto spec = fft.forward(windowed);
    for (std::size_t k = 0; k < spec.size(); ++k) magnitude[k] = std::abs(spec[k]);
    const Eigen::VectorXd log_energy =
        (bank * magnitude).array().unaryExpr([](double e) {
          return std::log(e + kLogFloor);
        });
    out.vectors.row(static_cast<Eigen::Index>(r)) = (dct * log_energy).transpose();
    out.times.push_back(fr[r].start_s);
  }
  return out;
}

void write_features_tsv(std::ostream& out, const FeatureMatrix& features) {
  out << "time_s";
  for (std::size_t j = 0; j < features.dim(); ++j) out << "\tc" << j;
  out << '\n';
  for (std::size_t r = 0; r < features.rows(); ++r) {
    out << features.times[r];
    for (std::size_t j = 0; j < features.dim(); ++j) {
      out << '\t' << features.vectors(static_cast<Eigen::Index>(r),
                                      static_cast<Eigen::Index>(j));
    }
    out << '\n';
  }
}

}  // namespace spkseg
