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

#include "spkseg/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace spkseg {

namespace {

struct MatchState {
  std::vector<std::vector<std::size_t>> adj;  // ref -> candidate hyps
  std::vector<std::ptrdiff_t> hyp_to_ref;
  std::vector<std::ptrdiff_t> ref_to_hyp;
  std::vector<char> seen;

  bool augment(std::size_t r) {
    for (std::size_t h : adj[r]) {
      if (seen[h]) continue;
      seen[h] = 1;
      if (hyp_to_ref[h] < 0 || augment(static_cast<std::size_t>(hyp_to_ref[h]))) {
        hyp_to_ref[h] = static_cast<std::ptrdiff_t>(r);
        ref_to_hyp[r] = static_cast<std::ptrdiff_t>(h);
        return true;
      }
    }
    return false;
  }
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

ChangePointSet::ChangePointSet(std::vector<double> times) : times_(std::move(times)) {
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || times_[i] < 0.0) {
      throw FormatError("change point " + std::to_string(i + 1) +
                        " is negative or not finite");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw FormatError("change points must be strictly increasing (entry " +
                        std::to_string(i + 1) + ")");
    }
  }
}

ChangePointSet read_change_points(std::istream& in) {
  std::vector<double> times;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double t = 0.0;
    if (!(ss >> t)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw FormatError("line " + std::to_string(line_no) +
                        ": expected a timestamp in seconds");
    }
    std::string rest;
    if (ss >> rest) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": trailing text after timestamp");
    }
    times.push_back(t);
  }
  return ChangePointSet(std::move(times));
}

ChangePointSet read_change_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open change-point file: " + path.string());
  try {
    return read_change_points(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_change_points(std::ostream& out, const ChangePointSet& points) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(3);
  for (double t : points.times()) ss << t << '\n';
  out << ss.str();
}

void write_change_points(const std::filesystem::path& path,
                         const ChangePointSet& points) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write change-point file: " + path.string());
  write_change_points(out, points);
  if (!out) throw IoError("write failed: " + path.string());
}

Matching match_points(const ChangePointSet& reference,
                      const ChangePointSet& hypothesis, double tolerance_s) {
  if (!(tolerance_s >= 0.0)) throw PreconditionError("tolerance must be >= 0");
  const auto& ref = reference.times();
  const auto& hyp = hypothesis.times();

  MatchState st;
  st.adj.resize(ref.size());
  st.hyp_to_ref.assign(hyp.size(), -1);
  st.ref_to_hyp.assign(ref.size(), -1);

  std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
  for (std::size_t r = 0; r < ref.size(); ++r) {
    auto it = std::lower_bound(hyp.begin(), hyp.end(), ref[r] - tolerance_s);
    for (; it != hyp.end() && *it <= ref[r] + tolerance_s; ++it) {
      const auto h = static_cast<std::size_t>(it - hyp.begin());
      const double dist = std::abs(ref[r] - *it);
      if (dist > tolerance_s) continue;
      st.adj[r].push_back(h);
      edges.emplace_back(dist, r, h);
    }
  }
  std::sort(edges.begin(), edges.end());
  for (const auto& [dist, r, h] : edges) {
    if (st.ref_to_hyp[r] < 0 && st.hyp_to_ref[h] < 0) {
      st.ref_to_hyp[r] = static_cast<std::ptrdiff_t>(h);
      st.hyp_to_ref[h] = static_cast<std::ptrdiff_t>(r);
    }
  }
  // Greedy-by-distance can strand a point whose only partner was taken by a
  // closer neighbour; augmenting paths recover those.
  for (std::size_t r = 0; r < ref.size(); ++r) {
    if (st.ref_to_hyp[r] >= 0) continue;
    st.seen.assign(hyp.size(), 0);
    st.augment(r);
  }

  Matching m;
  for (std::size_t r = 0; r < ref.size(); ++r) {
    if (st.ref_to_hyp[r] >= 0) {
      m.pairs.emplace_back(r, static_cast<std::size_t>(st.ref_to_hyp[r]));
    }
  }
  m.n_matched = m.pairs.size();
  return m;
}

double fd_rate(std::size_t n_hyp, std::size_t n_matched) {
  if (n_hyp == 0) return 0.0;
  return static_cast<double>(n_hyp - std::min(n_matched, n_hyp)) / n_hyp;
}

double fr_rate(std::size_t n_ref, std::size_t n_matched) {
  if (n_ref == 0) return 0.0;
  return static_cast<double>(n_ref - std::min(n_matched, n_ref)) / n_ref;
}

double f_measure(double fd, double fr) {
  const double denom = 2.0 - fd - fr;
  if (denom <= 0.0) return 0.0;
  return 2.0 * (1.0 - fd) * (1.0 - fr) / denom;
}

EvalReport evaluate(const ChangePointSet& reference,
                    const ChangePointSet& hypothesis, double tolerance_s) {
  const Matching m = match_points(reference, hypothesis, tolerance_s);
  EvalReport r;
  r.n_ref = reference.size();
  r.n_hyp = hypothesis.size();
  r.n_matched = m.n_matched;
  r.tolerance_s = tolerance_s;
  r.fd = fd_rate(r.n_hyp, r.n_matched);
  r.fr = fr_rate(r.n_ref, r.n_matched);
  r.f = f_measure(r.fd, r.fr);
  return r;
}

std::string to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["fd"] = report.fd;
  j["fr"] = report.fr;
  j["f"] = report.f;
  j["n_hyp"] = report.n_hyp;
  j["n_ref"] = report.n_ref;
  j["n_matched"] = report.n_matched;
  j["tolerance_s"] = report.tolerance_s;
  if (report.wall_time_s) j["wall_time_s"] = *report.wall_time_s;
  return j.dump(2);
}

void write_report_table(std::ostream& out, const EvalReport& report) {
  std::ostringstream ss;
  ss << std::left << std::setw(12) << "n_ref" << report.n_ref << '\n'
     << std::setw(12) << "n_hyp" << report.n_hyp << '\n'
     << std::setw(12) << "n_matched" << report.n_matched << '\n'
     << std::fixed << std::setprecision(3)
     << std::setw(12) << "tolerance_s" << report.tolerance_s << '\n'
     << std::setprecision(4)
     << std::setw(12) << "%FD" << 100.0 * report.fd << '\n'
     << std::setw(12) << "%FR" << 100.0 * report.fr << '\n'
     << std::setw(12) << "%F" << 100.0 * report.f << '\n';
  if (report.wall_time_s) {
    ss << std::setw(12) << "wall_time_s" << *report.wall_time_s << '\n';
  }
  out << ss.str();
}

BenchmarkTable benchmark(const AudioBuffer& buffer,
                         const ChangePointSet& reference,
                         const std::vector<Segmenter>& methods,
                         double tolerance_s, std::size_t repeats) {
  if (methods.empty()) throw UsageError("benchmark needs at least one method");
  repeats = std::max<std::size_t>(repeats, 1);
  BenchmarkTable table;
  for (const Segmenter& m : methods) {
    BenchmarkRow row;
    row.method = m.name;
    try {
      std::vector<double> times;
      std::vector<double> walls;
      for (std::size_t i = 0; i < repeats; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        times = m.run(buffer);
        const auto t1 = std::chrono::steady_clock::now();
        walls.push_back(std::chrono::duration<double>(t1 - t0).count());
      }
      row.wall_time_s = median(walls);
      row.report = evaluate(reference, ChangePointSet(times), tolerance_s);
      row.report.wall_time_s = row.wall_time_s;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    table.rows.push_back(std::move(row));
  }

  if (table.rows.size() > 1) {
    auto base = std::find_if(table.rows.begin(), table.rows.end(),
                             [](const BenchmarkRow& r) { return r.method == "bic-grow"; });
    if (base == table.rows.end()) base = table.rows.begin();
    table.baseline = base->method;
    if (!base->error) {
      for (BenchmarkRow& r : table.rows) {
        if (!r.error && r.wall_time_s > 0.0) r.speedup = base->wall_time_s / r.wall_time_s;
      }
    }
    auto pitch = std::find_if(table.rows.begin(), table.rows.end(),
                              [](const BenchmarkRow& r) { return r.method == "pitch"; });
    if (pitch != table.rows.end() && base->method == "bic-grow" && pitch->speedup) {
      table.pitch_speedup = pitch->speedup;
    }
  }
  return table;
}

void write_benchmark_csv(std::ostream& out, const BenchmarkTable& table) {
  const bool with_speedup = table.rows.size() > 1;
  std::ostringstream ss;
  ss << "method,fd,fr,f,wall_time_s";
  if (with_speedup) ss << ",speedup";
  ss << '\n';
  for (const BenchmarkRow& r : table.rows) {
    ss << r.method << ',';
    if (r.error) {
      ss << ",,,";
    } else {
      ss << std::fixed << std::setprecision(4) << r.report.fd << ',' << r.report.fr
         << ',' << r.report.f << ',' << std::setprecision(6) << r.wall_time_s;
    }
    if (with_speedup) {
      ss << ',';
      if (r.speedup) ss << std::setprecision(3) << *r.speedup;
    }
    ss << '\n';
  }
  out << ss.str();
}

}  // namespace spkseg
