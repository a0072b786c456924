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

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "spkseg/bic.hpp"

using namespace spkseg;

namespace {

RowMatrix to_matrix(const oracle::Points& pts) {
  RowMatrix m(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(pts[0].size()));
  for (std::size_t r = 0; r < pts.size(); ++r) {
    for (std::size_t c = 0; c < pts[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = pts[r][c];
    }
  }
  return m;
}

oracle::Points random_points(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const double shift = u(rng);
  const double scale = 0.5 + std::abs(u(rng));
  const std::size_t b = n / 2;
  oracle::Points pts(n, std::vector<double>(d));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      pts[r][c] = (r < b ? g(rng) : shift + scale * g(rng));
    }
  }
  return pts;
}

void check_spacing(const std::vector<ChangePoint>& pts, double min_gap) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].score > 0.0);
    if (i > 0) {
      CHECK(pts[i].time_s > pts[i - 1].time_s);
      CHECK(pts[i].time_s - pts[i - 1].time_s >= min_gap - 1e-9);
    }
  }
}

}  // namespace

TEST_CASE("fit_gaussian") {
  SUBCASE("degenerate cloud sits on the regularizer floor") {
    const RowMatrix rows = RowMatrix::Constant(20, 3, 2.5);
    const GaussianStats s = fit_gaussian(rows);
    CHECK(s.n == 20);
    CHECK(s.mean.isApproxToConstant(2.5));
    CHECK(s.cov.isZero());
    CHECK(s.log_det == doctest::Approx(3.0 * std::log(1e-6)));
  }
  SUBCASE("two points in one dimension") {
    RowMatrix rows(2, 1);
    rows << -1.0, 1.0;
    const GaussianStats s = fit_gaussian(rows);
    CHECK(s.mean(0) == 0.0);
    CHECK(s.cov(0, 0) == 1.0);
    CHECK(s.log_det == doctest::Approx(std::log(1.0 + 1e-6)).epsilon(1e-12));
  }
  SUBCASE("500 standard normal samples") {
    const FeatureMatrix f = fixture::gaussian_rows(500, 2, 123);
    const GaussianStats s = fit_gaussian(f.vectors);
    CHECK(s.mean.cwiseAbs().maxCoeff() < 0.15);
    CHECK((s.cov - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 0.15);
    CHECK(s.cov.isApprox(s.cov.transpose()));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(fit_gaussian(RowMatrix::Zero(3, 3)), PreconditionError);
    RowMatrix bad = RowMatrix::Zero(5, 2);
    bad(2, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(fit_gaussian(bad), FormatError);
  }
}

TEST_CASE("penalty") {
  for (std::size_t d : {1u, 5u, 13u}) CHECK(penalty(d, 100, 0.0) == 0.0);
  CHECK(penalty(1, 7, 1.0) == doctest::Approx(1.9459).epsilon(1e-4));
  // High-precision value of 0.6 * 104 * ln(100).
  const long double exact = 0.6L * 104.0L * std::log(100.0L);
  CHECK(penalty(13, 100, 1.2) == doctest::Approx(static_cast<double>(exact)).epsilon(1e-12));
  CHECK(penalty(13, 100, 1.2) == doctest::Approx(287.37).epsilon(1e-4));
}

TEST_CASE("delta_bic on identical halves is minus the penalty") {
  const FeatureMatrix half = fixture::gaussian_rows(60, 13, 77);
  RowMatrix z(120, 13);
  z.topRows(60) = half.vectors;
  z.bottomRows(60) = half.vectors;
  for (double lambda : {0.0, 1.0, 1.2}) {
    CHECK(std::abs(delta_bic(z, 60, lambda) + penalty(13, 120, lambda)) < 1e-9);
  }
}

TEST_CASE("delta_bic on well separated 1-D halves") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  oracle::Points pts(200, std::vector<double>(1));
  for (std::size_t i = 0; i < 200; ++i) pts[i][0] = (i < 100 ? -10.0 : 10.0) + g(rng);
  const double got = delta_bic(to_matrix(pts), 100, 1.0);
  CHECK(got > 0.0);
  CHECK(got == doctest::Approx(oracle::delta_bic(pts, 100, 1.0)).epsilon(1e-10));
  CHECK(got > 400.0);
}

TEST_CASE("lambda zero leaves the likelihood-ratio term") {
  std::mt19937_64 rng(8);
  const oracle::Points pts = random_points(80, 2, rng);
  const double glr = oracle::delta_bic(pts, 40, 0.0);
  CHECK(std::abs(delta_bic(to_matrix(pts), 40, 0.0) - glr) < 1e-8);
}

TEST_CASE("delta_bic agrees with the scalar oracle") {
  std::mt19937_64 rng(2024);
  int cases = 0;
  for (std::size_t d : {1u, 2u}) {
    for (int i = 0; i < 10; ++i) {
      const std::size_t n = 20 + static_cast<std::size_t>(rng() % 200);
      const oracle::Points pts = random_points(n, d, rng);
      const std::size_t b = d + 1 + static_cast<std::size_t>(rng() % (n - 2 * (d + 1)));
      const double lambda = 0.5 * static_cast<double>(rng() % 4);
      const double want = oracle::delta_bic(pts, b, lambda);
      const double got = delta_bic(to_matrix(pts), b, lambda);
      INFO("d=" << d << " n=" << n << " b=" << b);
      CHECK(std::abs(got - want) <= 1e-8 * std::max(1.0, std::abs(want)));
      ++cases;
    }
  }
  CHECK(cases == 20);
}

TEST_CASE("delta_bic invariances") {
  const FeatureMatrix f = fixture::gaussian_rows(150, 4, 31, {{0, 0.0}, {70, 1.5}});
  const RowMatrix& z = f.vectors;
  const double base = delta_bic(z, 70, 1.0);

  SUBCASE("translation") {
    Eigen::RowVectorXd shift(4);
    shift << 3.0, -7.0, 0.25, 100.0;
    const RowMatrix moved = z.rowwise() + shift;
    CHECK(std::abs(delta_bic(moved, 70, 1.0) - base) < 1e-9);
  }
  SUBCASE("scaling, with the regularizer scaled alongside") {
    for (double c : {0.1, 3.0, 50.0}) {
      const RowMatrix scaled = z * c;
      CHECK(std::abs(delta_bic(scaled, 70, 1.0, 1e-6 * c * c) - base) < 1e-6);
    }
  }
  SUBCASE("lambda enters only through the penalty") {
    for (double l1 : {0.0, 0.7}) {
      for (double l2 : {1.0, 2.5}) {
        const double lhs = delta_bic(z, 70, l1) - delta_bic(z, 70, l2);
        const double rhs = penalty(4, 150, l2) - penalty(4, 150, l1);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("delta_bic rejects splits that starve a side") {
  const FeatureMatrix f = fixture::gaussian_rows(30, 3, 1);
  CHECK_THROWS_AS(delta_bic(f.vectors, 3, 1.0), PreconditionError);
  CHECK_THROWS_AS(delta_bic(f.vectors, 27, 1.0), PreconditionError);
  CHECK_NOTHROW(delta_bic(f.vectors, 4, 1.0));
  CHECK_NOTHROW(delta_bic(f.vectors, 26, 1.0));
}

TEST_CASE("detect_growing") {
  const BicConfig cfg;
  SUBCASE("stationary input") {
    const FeatureMatrix f = fixture::gaussian_rows(1000, 13, 42);
    CHECK(detect_growing(f, cfg).empty());
  }
  SUBCASE("one switch at 5 s") {
    const FeatureMatrix f = fixture::gaussian_rows(1000, 13, 43, {{0, -5.0}, {500, 5.0}});
    const auto pts = detect_growing(f, cfg);
    REQUIRE(pts.size() == 1);
    CHECK(std::abs(pts[0].time_s - 5.0) <= 0.3);
  }
  SUBCASE("empty and short input") {
    CHECK(detect_growing(FeatureMatrix{}, cfg).empty());
    CHECK(detect_growing(fixture::gaussian_rows(50, 13, 1), cfg).empty());
  }
  SUBCASE("emitted points respect the minimum spacing") {
    const FeatureMatrix f = fixture::gaussian_rows(
        2000, 13, 44, {{0, 0.0}, {230, 3.0}, {390, -2.0}, {1100, 4.0}, {1180, 0.0}});
    const auto pts = detect_growing(f, cfg);
    CHECK(!pts.empty());
    check_spacing(pts, cfg.n_ini * f.hop_s);
  }
}

TEST_CASE("detect_fixed") {
  const BicConfig cfg;
  SUBCASE("stationary input") {
    CHECK(detect_fixed(fixture::gaussian_rows(1000, 13, 42), cfg).empty());
  }
  SUBCASE("one switch at 5 s") {
    const FeatureMatrix f = fixture::gaussian_rows(1000, 13, 45, {{0, -5.0}, {500, 5.0}});
    ScoreCurve curve;
    const auto pts = detect_fixed(f, cfg, &curve);
    REQUIRE(pts.size() == 1);
    CHECK(std::abs(pts[0].time_s - 5.0) <= 0.5);
    CHECK(curve.times.size() == curve.scores.size());
    CHECK(!curve.times.empty());
    std::ostringstream os;
    write_score_tsv(os, curve);
    CHECK(os.str().rfind("time_s\tscore\n", 0) == 0);
  }
  SUBCASE("shorter than the window") {
    CHECK(detect_fixed(fixture::gaussian_rows(80, 13, 1), cfg).empty());
  }
  SUBCASE("spacing") {
    const FeatureMatrix f = fixture::gaussian_rows(
        3000, 13, 46, {{0, 0.0}, {400, 3.0}, {460, -3.0}, {1500, 2.0}, {2200, 0.0}});
    const auto pts = detect_fixed(f, cfg);
    CHECK(!pts.empty());
    check_spacing(pts, cfg.fixed_window_rows(f.hop_s) * f.hop_s);
  }
}

TEST_CASE("verify_change") {
  const FeatureMatrix f = fixture::gaussian_rows(1000, 13, 47, {{0, -5.0}, {500, 5.0}});
  const double t_switch = boundary_time(f, 500);
  const Verification at = verify_change(f, t_switch, 0.4, 1.0);
  CHECK(at.accepted);
  CHECK(at.score > 0.0);
  CHECK_FALSE(verify_change(f, 2.5, 0.4, 1.0).accepted);
  const Verification edge = verify_change(f, 0.05, 0.4, 1.0);
  CHECK_FALSE(edge.accepted);
  CHECK(edge.score == -std::numeric_limits<double>::infinity());
}

TEST_CASE("configuration checks") {
  BicConfig cfg;
  CHECK_NOTHROW(cfg.validate(13));
  cfg.n_ini = 20;
  CHECK_THROWS_AS(cfg.validate(13), PreconditionError);
  cfg = BicConfig{};
  cfg.n_max = cfg.n_ini;
  CHECK_THROWS_AS(cfg.validate(13), PreconditionError);
  CHECK(BicConfig{}.fixed_window_rows(0.01) == 100);
}
