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

// Full-covariance Gaussian modelling of feature windows and BIC-based
// change detection.
//
// For a window Z of n rows split at b into X = Z[0, b) and Y = Z[b, n):
//
//   dBIC(b) = n/2 log|S_Z| - b/2 log|S_X| - (n-b)/2 log|S_Y|
//             - lambda/2 (d + d(d+1)/2) ln n
//
// with maximum-likelihood covariances regularized as S + eps*I. Natural
// logarithms throughout. A positive value favours a change at b.

#ifndef SPKSEG_BIC_HPP_
#define SPKSEG_BIC_HPP_

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "spkseg/features.hpp"

namespace spkseg {

using RowsView = Eigen::Ref<const RowMatrix>;

struct GaussianStats {
  std::size_t n = 0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;  // ML estimate, divided by n, unregularized
  double log_det = 0.0;  // of cov + reg_epsilon * I
};

struct BicConfig {
  double lambda = 1.0;
  double reg_epsilon = 1e-6;
  std::size_t n_ini = 100;
  std::size_t n_g = 50;
  std::size_t n_max = 600;
  std::size_t n_s = 50;
  std::size_t fixed_window = 0;  // rows; 0 means "one second of frames"

  void validate(std::size_t dim) const;
  std::size_t fixed_window_rows(double hop_s) const;
};

struct ChangePoint {
  double time_s = 0.0;
  double score = 0.0;  // dBIC at acceptance, always > 0
};

// Throws PreconditionError with fewer than d + 1 rows, FormatError on
// non-finite input.
GaussianStats fit_gaussian(const RowsView& rows, double reg_epsilon = 1e-6);

double penalty(std::size_t d, double n, double lambda);

// Throws PreconditionError unless both b and n - b are >= d + 1.
double delta_bic(const RowsView& z, std::size_t b, double lambda,
                 double reg_epsilon = 1e-6);

// Growing-window search: start with n_ini rows, take the best split; on a
// positive maximum emit it and restart there, otherwise grow by n_g up to
// n_max and then slide by n_s. Emitted points are at least n_ini rows apart.
std::vector<ChangePoint> detect_growing(const FeatureMatrix& features,
                                        const BicConfig& cfg);

struct ScoreCurve {
  std::vector<double> times;
  std::vector<double> scores;
};

// Fixed window sliding by n_s rows, scored at its center split. Positive
// local maxima survive non-maximum suppression within one window length.
std::vector<ChangePoint> detect_fixed(const FeatureMatrix& features,
                                      const BicConfig& cfg,
                                      ScoreCurve* curve = nullptr);

struct Verification {
  bool accepted = false;
  double score = 0.0;  // -infinity when either side was too small
};

// dBIC over the rows whose centers fall in [t - window_s/2, t + window_s/2],
// split at the frame boundary nearest t.
Verification verify_change(const FeatureMatrix& features, double t,
                           double window_s, double lambda,
                           double reg_epsilon = 1e-6);

// Time halfway between the centers of rows i - 1 and i.
double boundary_time(const FeatureMatrix& features, std::size_t row);

void write_score_tsv(std::ostream& out, const ScoreCurve& curve);

}  // namespace spkseg

#endif  // SPKSEG_BIC_HPP_
