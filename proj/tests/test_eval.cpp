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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "spkseg/eval.hpp"

using namespace spkseg;

namespace {

std::vector<double> random_times(std::mt19937_64& rng, std::size_t max_n) {
  std::uniform_int_distribution<std::size_t> count(0, max_n);
  std::uniform_int_distribution<int> slot(0, 40);
  std::set<int> picked;
  const std::size_t n = count(rng);
  while (picked.size() < n) picked.insert(slot(rng));
  std::vector<double> t;
  for (int s : picked) t.push_back(0.25 * s);
  return t;
}

}  // namespace

TEST_CASE("ChangePointSet validation") {
  CHECK_NOTHROW(ChangePointSet({0.0, 1.0, 2.5}));
  CHECK_THROWS_AS(ChangePointSet({1.0, 1.0}), FormatError);
  CHECK_THROWS_AS(ChangePointSet({2.0, 1.0}), FormatError);
  CHECK_THROWS_AS(ChangePointSet({-0.1}), FormatError);
  CHECK_THROWS_AS(ChangePointSet({std::nan("")}), FormatError);
}

TEST_CASE("change-point files") {
  std::istringstream in("# reference\n1.5\n\n  3.25  \n4 # trailing comment\n");
  const ChangePointSet s = read_change_points(in);
  CHECK(s.times() == std::vector<double>{1.5, 3.25, 4.0});
  std::ostringstream out;
  write_change_points(out, s);
  CHECK(out.str() == "1.500\n3.250\n4.000\n");

  std::istringstream bad("1.0\n0.5\n");
  CHECK_THROWS_AS(read_change_points(bad), FormatError);
  std::istringstream junk("1.0 2.0\n");
  CHECK_THROWS_AS(read_change_points(junk), FormatError);
  std::istringstream word("abc\n");
  CHECK_THROWS_AS(read_change_points(word), FormatError);
  CHECK_THROWS_AS(read_change_points(std::filesystem::path("/nonexistent/ref.txt")), IoError);
}

TEST_CASE("match_points examples") {
  CHECK(match_points(ChangePointSet({1.0, 3.0}), ChangePointSet({1.0, 5.0}), 0.5).n_matched == 1);
  const ChangePointSet s({0.5, 2.0, 7.25});
  CHECK(match_points(s, s, 0.0).n_matched == 3);
  CHECK(match_points(s, s, 2.0).n_matched == 3);
  CHECK_THROWS_AS(match_points(s, s, -1.0), PreconditionError);
}

TEST_CASE("closest-first pairing can strand a point; the result is still maximum") {
  // 1.0 <-> 0.52 (0.48) is closer than 0 <-> 0.52 (0.52), which would leave
  // 0 unmatched; the extension step recovers the second pair.
  const Matching m = match_points(ChangePointSet({0.0, 1.0}), ChangePointSet({0.52, 1.5}), 0.55);
  CHECK(m.n_matched == 2);
  for (const auto& [r, h] : m.pairs) {
    const double dr = std::vector<double>{0.0, 1.0}[r];
    const double dh = std::vector<double>{0.52, 1.5}[h];
    CHECK(std::abs(dr - dh) <= 0.55);
  }
}

TEST_CASE("matching size equals exhaustive maximum matching") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ref = random_times(rng, 8);
    const auto hyp = random_times(rng, 8);
    const double tol = 0.1 + 0.05 * static_cast<double>(rng() % 20);
    const Matching m = match_points(ChangePointSet(ref), ChangePointSet(hyp), tol);
    INFO("trial " << trial);
    CHECK(m.n_matched == oracle::max_matching(ref, hyp, tol));
    std::set<std::size_t> used_r, used_h;
    for (const auto& [r, h] : m.pairs) {
      CHECK(used_r.insert(r).second);
      CHECK(used_h.insert(h).second);
      CHECK(std::abs(ref[r] - hyp[h]) <= tol);
    }
  }
}

TEST_CASE("matching is monotone in tolerance") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const ChangePointSet ref(random_times(rng, 8));
    const ChangePointSet hyp(random_times(rng, 8));
    std::size_t prev = 0;
    for (double tol = 0.0; tol <= 3.0; tol += 0.125) {
      const std::size_t n = match_points(ref, hyp, tol).n_matched;
      CHECK(n >= prev);
      prev = n;
    }
  }
}

TEST_CASE("rates and F") {
  CHECK(fd_rate(2, 1) == 0.5);
  CHECK(fr_rate(2, 2) == 0.0);
  CHECK(fd_rate(0, 0) == 0.0);
  CHECK(fr_rate(0, 0) == 0.0);
  CHECK(f_measure(0.0, 0.0) == 1.0);
  CHECK(f_measure(1.0, 1.0) == 0.0);
  CHECK(f_measure(0.4207, 0.0126) == doctest::Approx(oracle::f_measure(0.4207, 0.0126)));
  CHECK(std::abs(f_measure(0.4207, 0.0126) - 0.7302) <= 0.0005);
  CHECK(std::abs(f_measure(0.3888, 0.0) - 0.7587) <= 0.0005);
  CHECK(std::abs(f_measure(0.4287, 0.0063) - 0.7255) <= 0.0005);
}

TEST_CASE("F properties") {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  for (double a : grid) {
    for (double b : grid) {
      CHECK(f_measure(a, b) == doctest::Approx(f_measure(b, a)));
      CHECK(f_measure(a, b) >= 0.0);
      CHECK(f_measure(a, b) <= 1.0);
      CHECK((f_measure(a, b) == 1.0) == (a == 0.0 && b == 0.0));
      CHECK((f_measure(a, b) == 0.0) == (a == 1.0 || b == 1.0));
      if (a < 1.0 && b < 1.0 && a + 0.05 < 1.0) {
        CHECK(f_measure(a + 0.05, b) < f_measure(a, b));
      }
    }
  }
}

TEST_CASE("evaluate") {
  const EvalReport r = evaluate(ChangePointSet({1.0, 3.0}), ChangePointSet({1.0, 5.0}), 0.5);
  CHECK(r.fd == 0.5);
  CHECK(r.fr == 0.5);
  CHECK(r.f == 0.5);
  CHECK(r.n_matched == 1);

  const ChangePointSet s({2.0, 4.0});
  const EvalReport same = evaluate(s, s, 0.1);
  CHECK(same.fd == 0.0);
  CHECK(same.fr == 0.0);
  CHECK(same.f == 1.0);

  const EvalReport none = evaluate(s, ChangePointSet{}, 0.5);
  CHECK(none.fd == 0.0);
  CHECK(none.fr == 1.0);
  CHECK(none.f == 0.0);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const ChangePointSet a(random_times(rng, 8));
    const ChangePointSet b(random_times(rng, 8));
    const EvalReport ab = evaluate(a, b, 0.4);
    const EvalReport ba = evaluate(b, a, 0.4);
    CHECK(ab.fd == ba.fr);
    CHECK(ab.fr == ba.fd);
    CHECK(ab.n_matched <= std::min(ab.n_hyp, ab.n_ref));
  }
}

TEST_CASE("report output") {
  EvalReport r = evaluate(ChangePointSet({1.0, 3.0}), ChangePointSet({1.0, 5.0}), 0.5);
  r.wall_time_s = 1.25;
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["fd"] == 0.5);
  CHECK(j["f"] == 0.5);
  CHECK(j["n_matched"] == 1);
  CHECK(j["wall_time_s"] == 1.25);
  std::ostringstream os;
  write_report_table(os, r);
  CHECK(os.str().find("%F") != std::string::npos);
}

TEST_CASE("benchmark") {
  const AudioBuffer buffer(std::vector<double>(800, 0.0), 8000);
  const ChangePointSet ref({0.02, 0.05});
  const Segmenter noop{"noop", [](const AudioBuffer&) { return std::vector<double>{}; }};
  const Segmenter exact{"exact", [](const AudioBuffer&) { return std::vector<double>{0.02, 0.05}; }};
  const Segmenter broken{"broken", [](const AudioBuffer&) -> std::vector<double> {
                           throw PreconditionError("boom");
                         }};

  SUBCASE("single method has no speedup column") {
    const BenchmarkTable t = benchmark(buffer, ref, {exact}, 0.01);
    REQUIRE(t.rows.size() == 1);
    CHECK_FALSE(t.rows[0].speedup.has_value());
    std::ostringstream os;
    write_benchmark_csv(os, t);
    CHECK(os.str().rfind("method,fd,fr,f,wall_time_s\n", 0) == 0);
  }
  SUBCASE("no-op row and failures") {
    const BenchmarkTable t = benchmark(buffer, ref, {exact, noop, broken}, 0.01, 3);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.baseline == "exact");
    CHECK(t.rows[1].report.fd == 0.0);
    CHECK(t.rows[1].report.fr == 1.0);
    CHECK(t.rows[2].error.has_value());
    CHECK(t.rows[0].speedup.has_value());
    std::ostringstream os;
    write_benchmark_csv(os, t);
    CHECK(os.str().rfind("method,fd,fr,f,wall_time_s,speedup\n", 0) == 0);
  }
  SUBCASE("speedup is relative to bic-grow") {
    const Segmenter slow{"bic-grow", [](const AudioBuffer&) {
                           volatile double x = 0;
                           for (int i = 0; i < 2000000; ++i) x = x + 1.0;
                           return std::vector<double>{};
                         }};
    const Segmenter fast{"pitch", [](const AudioBuffer&) { return std::vector<double>{}; }};
    const BenchmarkTable t = benchmark(buffer, ref, {fast, slow}, 0.01);
    CHECK(t.baseline == "bic-grow");
    REQUIRE(t.pitch_speedup.has_value());
    CHECK(*t.pitch_speedup > 1.0);
  }
  CHECK_THROWS_AS(benchmark(buffer, ref, {}, 0.1), UsageError);
}
