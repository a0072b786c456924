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

#include "spkseg/pitch.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>

#include "fft.hpp"

namespace spkseg {

namespace {

constexpr double kSpectralFloor = 1e-10;
// AMDF dips shallower than this fraction of the in-range maximum are not
// accepted as the "first" minimum.
constexpr double kAmdfDipFraction = 0.5;

double lagged_product(std::span<const double> s, std::size_t tau) {
  double acc = 0.0;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i + tau < n; ++i) acc += s[i] * s[i + tau];
  return acc;
}

double lagged_abs_diff(std::span<const double> s, std::size_t tau) {
  double acc = 0.0;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i + tau < n; ++i) acc += std::abs(s[i] - s[i + tau]);
  return acc;
}

void require_nonempty(std::span<const double> frame, const char* what) {
  if (frame.empty()) {
    throw PreconditionError(std::string(what) + ": empty frame");
  }
}

// Holds the FFT plans for one frame length so a whole track reuses them.
class Detector {
 public:
  Detector(std::size_t frame_len, int sample_rate_hz, const PitchConfig& cfg)
      : frame_len_(frame_len), fs_(sample_rate_hz), cfg_(cfg),
        lags_(lag_range(sample_rate_hz, cfg.min_hz, cfg.max_hz)) {
    if (frame_len_ <= lags_.max_lag) {
      throw PreconditionError(
          "pitch frame of " + std::to_string(frame_len_) +
          " samples is too short for max lag " + std::to_string(lags_.max_lag));
    }
    if (cfg_.method == PitchMethod::kCepstral) {
      const std::size_t n = internal::next_pow2(2 * frame_len_);
      fwd_ = std::make_unique<internal::RealFft>(n);
      inv_ = std::make_unique<internal::RealEvenInverseFft>(n);
      log_mag_.resize(n / 2 + 1);
    }
  }

  double operator()(std::span<const double> frame) {
    if (frame.size() != frame_len_) {
      throw PreconditionError("pitch frame length mismatch");
    }
    const double energy = lagged_product(frame, 0);
    if (!(energy > 0.0)) return 0.0;
    std::size_t lag = 0;
    switch (cfg_.method) {
      case PitchMethod::kAcf: lag = acf_lag(frame, energy); break;
      case PitchMethod::kAmdf: lag = amdf_lag(frame); break;
      case PitchMethod::kCepstral: lag = cepstral_lag(frame, energy); break;
    }
    return lag == 0 ? 0.0 : static_cast<double>(fs_) / static_cast<double>(lag);
  }

 private:
  std::size_t acf_lag(std::span<const double> frame, double energy) const {
    std::size_t best = lags_.min_lag;
    double best_r = -std::numeric_limits<double>::infinity();
    for (std::size_t tau = lags_.min_lag; tau <= lags_.max_lag; ++tau) {
      const double r = lagged_product(frame, tau);
      if (r > best_r) {
        best_r = r;
        best = tau;
      }
    }
    return best_r / energy >= cfg_.voicing_threshold ? best : 0;
  }

  std::size_t amdf_lag(std::span<const double> frame) const {
    const std::size_t n = frame.size();
    // Averaging over the overlap keeps long lags from winning merely because
    // fewer terms are summed.
    const std::size_t lo = lags_.min_lag > 1 ? lags_.min_lag - 1 : 1;
    const std::size_t hi = std::min(lags_.max_lag + 1, n - 1);
    std::vector<double> d(hi + 1, 0.0);
    for (std::size_t tau = lo; tau <= hi; ++tau) {
      d[tau] = lagged_abs_diff(frame, tau) / static_cast<double>(n - tau);
    }
    double max_d = 0.0, sum_d = 0.0;
    std::size_t global = lags_.min_lag;
    for (std::size_t tau = lags_.min_lag; tau <= lags_.max_lag; ++tau) {
      max_d = std::max(max_d, d[tau]);
      sum_d += d[tau];
      if (d[tau] < d[global]) global = tau;
    }
    const double mean_d =
        sum_d / static_cast<double>(lags_.max_lag - lags_.min_lag + 1);
    if (!(mean_d > 0.0)) return 0;

    std::size_t chosen = global;
    for (std::size_t tau = lags_.min_lag; tau <= lags_.max_lag; ++tau) {
      const bool left_ok = tau - 1 < lo || d[tau] <= d[tau - 1];
      const bool right_ok = tau + 1 > hi || d[tau] <= d[tau + 1];
      if (left_ok && right_ok && d[tau] <= kAmdfDipFraction * max_d) {
        chosen = tau;
        break;
      }
    }
    return 1.0 - d[chosen] / mean_d >= cfg_.voicing_threshold ? chosen : 0;
  }

  std::size_t cepstral_lag(std::span<const double> frame, double energy) {
    const auto spec = fwd_->forward(frame);
    for (std::size_t k = 0; k < spec.size(); ++k) {
      log_mag_[k] = std::log(std::abs(spec[k]) + kSpectralFloor);
    }
    const auto c = inv_->inverse(log_mag_);
    std::size_t best = lags_.min_lag;
    double sum_abs = 0.0;
    for (std::size_t q = lags_.min_lag; q <= lags_.max_lag; ++q) {
      sum_abs += std::abs(c[q]);
      if (c[q] > c[best]) best = q;
    }
    const double mean_abs =
        sum_abs / static_cast<double>(lags_.max_lag - lags_.min_lag + 1);
    if (!(mean_abs > 0.0)) return 0;
    const bool peaked = c[best] >= (1.0 + cfg_.voicing_threshold) * mean_abs;
    const bool periodic =
        lagged_product(frame, best) / energy >= cfg_.voicing_threshold;
    return peaked && periodic ? best : 0;
  }

  std::size_t frame_len_;
  int fs_;
  PitchConfig cfg_;
  LagRange lags_;
  std::unique_ptr<internal::RealFft> fwd_;
  std::unique_ptr<internal::RealEvenInverseFft> inv_;
  std::vector<double> log_mag_;
};

}  // namespace

std::string to_string(PitchMethod method) {
  switch (method) {
    case PitchMethod::kAcf: return "acf";
    case PitchMethod::kAmdf: return "amdf";
    case PitchMethod::kCepstral: return "cepstral";
  }
  return "?";
}

PitchMethod parse_pitch_method(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "acf") return PitchMethod::kAcf;
  if (lower == "amdf") return PitchMethod::kAmdf;
  if (lower == "cepstral" || lower == "cepstrum") return PitchMethod::kCepstral;
  throw UsageError("unknown pitch method: " + name);
}

void PitchConfig::validate() const {
  if (!(min_hz > 0.0)) throw PreconditionError("pitch min_hz must be > 0");
  if (!(max_hz > min_hz)) throw PreconditionError("pitch max_hz must exceed min_hz");
  if (!(frame_len_s > 0.0)) throw PreconditionError("pitch frame_len_s must be > 0");
  if (!(hop_s > 0.0)) throw PreconditionError("pitch hop_s must be > 0");
  if (!(voicing_threshold >= 0.0 && voicing_threshold <= 1.0)) {
    throw PreconditionError("voicing_threshold must lie in [0, 1]");
  }
}

void PitchConfig::validate(int sample_rate_hz) const {
  validate();
  if (sample_rate_hz <= 0) throw PreconditionError("sample rate must be positive");
  if (!(frame_len_s * sample_rate_hz > sample_rate_hz / min_hz)) {
    throw PreconditionError("pitch frame must be longer than the longest period 1/min_hz");
  }
  const LagRange lags = lag_range(sample_rate_hz, min_hz, max_hz);
  if (lags.min_lag > lags.max_lag) {
    throw PreconditionError("pitch range holds no integer lag at this sample rate");
  }
}

std::size_t PitchConfig::frame_len_samples(int sample_rate_hz) const {
  return static_cast<std::size_t>(std::llround(frame_len_s * sample_rate_hz));
}

std::size_t PitchConfig::hop_samples(int sample_rate_hz) const {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(hop_s * sample_rate_hz)));
}

LagRange lag_range(int sample_rate_hz, double min_hz, double max_hz) {
  const double fs = sample_rate_hz;
  LagRange r;
  r.min_lag = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fs / max_hz)));
  r.max_lag = static_cast<std::size_t>(std::floor(fs / min_hz));
  return r;
}

std::vector<double> acf(std::span<const double> frame) {
  require_nonempty(frame, "acf");
  std::vector<double> r(frame.size());
  for (std::size_t tau = 0; tau < frame.size(); ++tau) {
    r[tau] = lagged_product(frame, tau);
  }
  return r;
}

std::vector<double> amdf(std::span<const double> frame) {
  require_nonempty(frame, "amdf");
  std::vector<double> d(frame.size());
  for (std::size_t tau = 0; tau < frame.size(); ++tau) {
    d[tau] = lagged_abs_diff(frame, tau);
  }
  return d;
}

std::vector<double> cepstrum(std::span<const double> frame) {
  require_nonempty(frame, "cepstrum");
  const std::size_t n = internal::next_pow2(2 * frame.size());
  internal::RealFft fwd(n);
  internal::RealEvenInverseFft inv(n);
  const auto spec = fwd.forward(frame);
  std::vector<double> log_mag(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    log_mag[k] = std::log(std::abs(spec[k]) + kSpectralFloor);
  }
  const auto c = inv.inverse(log_mag);
  return {c.begin(), c.end()};
}

double pitch_frame(std::span<const double> frame, int sample_rate_hz,
                   const PitchConfig& cfg) {
  cfg.validate();
  Detector detect(frame.size(), sample_rate_hz, cfg);
  return detect(frame);
}

PitchTrack pitch_track(const AudioBuffer& buffer, const PitchConfig& cfg) {
  const int fs = buffer.sample_rate_hz();
  cfg.validate(fs);
  const FramePlan plan{cfg.frame_len_samples(fs), cfg.hop_samples(fs)};
  if (buffer.size() < plan.window_len) {
    throw PreconditionError("audio shorter than one frame");
  }
  Detector detect(plan.window_len, fs, cfg);
  PitchTrack track;
  track.frame_len_s = static_cast<double>(plan.window_len) / fs;
  const auto fr = frames(buffer, plan);
  track.times.reserve(fr.size());
  track.pitch_hz.reserve(fr.size());
  for (const Frame& f : fr) {
    track.times.push_back(f.start_s);
    track.pitch_hz.push_back(detect(f.samples));
  }
  return track;
}

void write_pitch_tsv(std::ostream& out, const PitchTrack& track) {
  out << "time_s\tpitch_hz\n";
  out << std::fixed;
  for (std::size_t i = 0; i < track.times.size(); ++i) {
    out << std::setprecision(3) << track.times[i] << '\t'
        << std::setprecision(3) << track.pitch_hz[i] << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace spkseg
