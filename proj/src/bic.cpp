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

#include "spkseg/bic.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

namespace spkseg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_rows(std::size_t n, std::size_t d) {
  if (n < d + 1) {
    throw PreconditionError("Gaussian fit needs at least d + 1 = " +
                            std::to_string(d + 1) + " rows, got " +
                            std::to_string(n));
  }
}

// log|cov + eps*I| via Cholesky.
double regularized_log_det(const Eigen::MatrixXd& cov, double reg_epsilon) {
  Eigen::MatrixXd reg = cov;
  reg.diagonal().array() += reg_epsilon;
  const Eigen::LLT<Eigen::MatrixXd> llt(reg);
  if (llt.info() != Eigen::Success) {
    throw PreconditionError("regularized covariance is not positive definite");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double window_log_det(const RowsView& rows, double reg_epsilon) {
  const Eigen::RowVectorXd mean = rows.colwise().mean();
  const RowMatrix centered = rows.rowwise() - mean;
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(rows.rows());
  return regularized_log_det(cov, reg_epsilon);
}

// dBIC with the full-window term precomputed.
double split_score(const RowsView& z, std::size_t b, double log_det_z,
                   double pen, double reg_epsilon) {
  const auto n = static_cast<std::size_t>(z.rows());
  const double ld_x = window_log_det(z.topRows(static_cast<Eigen::Index>(b)), reg_epsilon);
  const double ld_y =
      window_log_det(z.bottomRows(static_cast<Eigen::Index>(n - b)), reg_epsilon);
  return 0.5 * n * log_det_z - 0.5 * b * ld_x - 0.5 * (n - b) * ld_y - pen;
}

}  // namespace

void BicConfig::validate(std::size_t dim) const {
  if (!(lambda >= 0.0)) throw PreconditionError("lambda must be >= 0");
  if (!(reg_epsilon > 0.0)) throw PreconditionError("reg_epsilon must be > 0");
  if (n_ini < 2 * (dim + 1)) {
    throw PreconditionError("n_ini must be at least 2(d + 1) = " +
                            std::to_string(2 * (dim + 1)));
  }
  if (n_g < 1) throw PreconditionError("n_g must be >= 1");
  if (n_max <= n_ini) throw PreconditionError("n_max must exceed n_ini");
  if (n_s < 1) throw PreconditionError("n_s must be >= 1");
}

std::size_t BicConfig::fixed_window_rows(double hop_s) const {
  if (fixed_window > 0) return fixed_window;
  return static_cast<std::size_t>(std::llround(1.0 / hop_s));
}

GaussianStats fit_gaussian(const RowsView& rows, double reg_epsilon) {
  const auto n = static_cast<std::size_t>(rows.rows());
  const auto d = static_cast<std::size_t>(rows.cols());
  require_rows(n, d);
  if (!rows.allFinite()) throw FormatError("non-finite feature values");
  GaussianStats s;
  s.n = n;
  s.mean = rows.colwise().mean().transpose();
  const RowMatrix centered = rows.rowwise() - s.mean.transpose();
  s.cov = (centered.transpose() * centered) / static_cast<double>(n);
  s.log_det = regularized_log_det(s.cov, reg_epsilon);
  return s;
}

double penalty(std::size_t d, double n, double lambda) {
  const double dd = static_cast<double>(d);
  return 0.5 * lambda * (dd + 0.5 * dd * (dd + 1.0)) * std::log(n);
}

double delta_bic(const RowsView& z, std::size_t b, double lambda,
                 double reg_epsilon) {
  const auto n = static_cast<std::size_t>(z.rows());
  const auto d = static_cast<std::size_t>(z.cols());
  if (b < d + 1 || b > n || n - b < d + 1) {
    throw PreconditionError("split at " + std::to_string(b) + " of " +
                            std::to_string(n) +
                            " rows leaves a side with fewer than d + 1 rows");
  }
  if (!z.allFinite()) throw FormatError("non-finite feature values");
  return split_score(z, b, window_log_det(z, reg_epsilon),
                     penalty(d, static_cast<double>(n), lambda), reg_epsilon);
}

double boundary_time(const FeatureMatrix& features, std::size_t row) {
  if (row == 0) return features.times.front();
  return 0.5 * (features.center_time(row - 1) + features.center_time(row));
}

std::vector<ChangePoint> detect_growing(const FeatureMatrix& features,
                                        const BicConfig& cfg) {
  const std::size_t d = features.dim();
  const std::size_t total = features.rows();
  std::vector<ChangePoint> out;
  if (total < cfg.n_ini || total == 0) return out;
  cfg.validate(d);
  if (!features.vectors.allFinite()) throw FormatError("non-finite feature values");

  std::size_t start = 0;
  std::size_t size = cfg.n_ini;
  std::optional<std::size_t> last;
  for (;;) {
    const std::size_t end = std::min(start + size, total);
    const std::size_t n = end - start;
    std::size_t lo = d + 1;
    if (last) lo = std::max(lo, *last + cfg.n_ini - start);
    const std::size_t hi = n >= d + 1 ? n - d - 1 : 0;

    double best = kNegInf;
    std::size_t best_b = 0;
    if (lo <= hi) {
      const auto z = features.vectors.middleRows(static_cast<Eigen::Index>(start),
                                                 static_cast<Eigen::Index>(n));
      const double ld_z = window_log_det(z, cfg.reg_epsilon);
      const double pen = penalty(d, static_cast<double>(n), cfg.lambda);
      for (std::size_t b = lo; b <= hi; ++b) {
        const double s = split_score(z, b, ld_z, pen, cfg.reg_epsilon);
        if (s > best) {
          best = s;
          best_b = b;
        }
      }
    }

    if (best > 0.0) {
      const std::size_t row = start + best_b;
      out.push_back({boundary_time(features, row), best});
      last = row;
      start = row;
      size = cfg.n_ini;
      continue;
    }
    if (end == total) break;
    if (size < cfg.n_max) {
      size = std::min(size + cfg.n_g, cfg.n_max);
    } else {
      start += cfg.n_s;
    }
  }
  return out;
}

std::vector<ChangePoint> detect_fixed(const FeatureMatrix& features,
                                      const BicConfig& cfg, ScoreCurve* curve) {
  const std::size_t d = features.dim();
  const std::size_t total = features.rows();
  if (curve != nullptr) *curve = ScoreCurve{};
  std::vector<ChangePoint> out;
  if (total == 0) return out;
  if (!(cfg.lambda >= 0.0) || !(cfg.reg_epsilon > 0.0) || cfg.n_s < 1) {
    throw PreconditionError("invalid BIC configuration");
  }
  const std::size_t w = cfg.fixed_window_rows(features.hop_s);
  if (w < 2 * (d + 1)) {
    throw PreconditionError("fixed BIC window must hold at least 2(d + 1) rows");
  }
  if (total < w) return out;

  std::vector<std::size_t> rows;
  std::vector<double> scores;
  for (std::size_t p = 0; p + w <= total; p += cfg.n_s) {
    const auto z = features.vectors.middleRows(static_cast<Eigen::Index>(p),
                                               static_cast<Eigen::Index>(w));
    rows.push_back(p + w / 2);
    scores.push_back(delta_bic(z, w / 2, cfg.lambda, cfg.reg_epsilon));
  }
  if (curve != nullptr) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      curve->times.push_back(boundary_time(features, rows[i]));
      curve->scores.push_back(scores[i]);
    }
  }

  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool left = i == 0 || scores[i] >= scores[i - 1];
    const bool right = i + 1 == scores.size() || scores[i] > scores[i + 1];
    if (scores[i] > 0.0 && left && right) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  std::vector<std::size_t> kept;
  for (std::size_t i : peaks) {
    const bool clear = std::all_of(kept.begin(), kept.end(), [&](std::size_t k) {
      const std::size_t gap = rows[i] > rows[k] ? rows[i] - rows[k] : rows[k] - rows[i];
      return gap >= w;
    });
    if (clear) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  for (std::size_t i : kept) {
    out.push_back({boundary_time(features, rows[i]), scores[i]});
  }
  return out;
}

Verification verify_change(const FeatureMatrix& features, double t,
                           double window_s, double lambda, double reg_epsilon) {
  const Verification rejected{false, kNegInf};
  const std::size_t total = features.rows();
  const std::size_t d = features.dim();
  if (total == 0 || !(window_s > 0.0)) return rejected;

  const double lo_t = t - 0.5 * window_s;
  const double hi_t = t + 0.5 * window_s;
  std::size_t first = 0;
  while (first < total && features.center_time(first) < lo_t) ++first;
  std::size_t end = first;
  while (end < total && features.center_time(end) <= hi_t) ++end;
  if (end - first < 2 * (d + 1)) return rejected;

  std::size_t split = first + 1;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = first + 1; i < end; ++i) {
    const double gap = std::abs(boundary_time(features, i) - t);
    if (gap < best_gap) {
      best_gap = gap;
      split = i;
    }
  }
  const std::size_t n = end - first;
  const std::size_t b = split - first;
  if (b < d + 1 || n - b < d + 1) return rejected;

  const auto z = features.vectors.middleRows(static_cast<Eigen::Index>(first),
                                             static_cast<Eigen::Index>(n));
  const double score = delta_bic(z, b, lambda, reg_epsilon);
  return {score > 0.0, score};
}

void write_score_tsv(std::ostream& out, const ScoreCurve& curve) {
  out << "time_s\tscore\n";
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    out << std::fixed << std::setprecision(3) << curve.times[i] << '\t'
        << std::setprecision(6) << curve.scores[i] << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace spkseg
