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

// Change-point scoring (false-detection rate, false-rejection rate,
// F-measure) and head-to-head benchmarking of segmenters.

#ifndef SPKSEG_EVAL_HPP_
#define SPKSEG_EVAL_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spkseg/audio.hpp"

namespace spkseg {

// Strictly increasing, finite, non-negative timestamps in seconds.
class ChangePointSet {
 public:
  ChangePointSet() = default;
  // Throws FormatError if the invariant does not hold.
  explicit ChangePointSet(std::vector<double> times);

  const std::vector<double>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

 private:
  std::vector<double> times_;
};

// One decimal timestamp per line. Blank lines and '#' comments are skipped.
ChangePointSet read_change_points(std::istream& in);
ChangePointSet read_change_points(const std::filesystem::path& path);
// Three decimals, newline terminated.
void write_change_points(std::ostream& out, const ChangePointSet& points);
void write_change_points(const std::filesystem::path& path,
                         const ChangePointSet& points);

struct Matching {
  std::size_t n_matched = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (ref, hyp)
};

// One-to-one pairing of points within tolerance_s. Pairs are taken greedily
// by increasing distance (ties: earlier reference first), then augmenting
// paths extend the pairing to maximum cardinality.
Matching match_points(const ChangePointSet& reference,
                      const ChangePointSet& hypothesis, double tolerance_s);

// Empty denominators yield 0.
double fd_rate(std::size_t n_hyp, std::size_t n_matched);
double fr_rate(std::size_t n_ref, std::size_t n_matched);
// 2(1 - fd)(1 - fr) / (2 - fd - fr), and 0 when fd = fr = 1.
double f_measure(double fd, double fr);

struct EvalReport {
  double fd = 0.0;
  double fr = 0.0;
  double f = 0.0;
  std::size_t n_hyp = 0;
  std::size_t n_ref = 0;
  std::size_t n_matched = 0;
  double tolerance_s = 0.0;
  std::optional<double> wall_time_s;
};

EvalReport evaluate(const ChangePointSet& reference,
                    const ChangePointSet& hypothesis, double tolerance_s);

std::string to_json(const EvalReport& report);
void write_report_table(std::ostream& out, const EvalReport& report);

// A named segmentation method. run() returns hypothesized change times.
struct Segmenter {
  std::string name;
  std::function<std::vector<double>(const AudioBuffer&)> run;
};

struct BenchmarkRow {
  std::string method;
  EvalReport report;
  double wall_time_s = 0.0;          // median over repeats
  std::optional<double> speedup;     // baseline time / this time
  std::optional<std::string> error;  // set when the method threw
};

struct BenchmarkTable {
  std::vector<BenchmarkRow> rows;
  std::string baseline;                   // method the speedups refer to
  std::optional<double> pitch_speedup;    // bic-grow time / pitch time
};

// Runs every method on the same buffer, sequentially. Speedups are
// reported when more than one method ran; the baseline is "bic-grow" when
// present, else the first method.
BenchmarkTable benchmark(const AudioBuffer& buffer,
                         const ChangePointSet& reference,
                         const std::vector<Segmenter>& methods,
                         double tolerance_s, std::size_t repeats = 1);

// Columns: method, fd, fr, f, wall_time_s, and speedup when present.
void write_benchmark_csv(std::ostream& out, const BenchmarkTable& table);

}  // namespace spkseg

#endif  // SPKSEG_EVAL_HPP_
