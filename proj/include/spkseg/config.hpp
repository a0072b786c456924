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

// Flat run configuration shared by every command, and the named
// segmentation methods built from it.
//
// Config files hold one "key = value" per line; '#' starts a comment.
// Settings are applied in order: defaults, then the file, then flags.

#ifndef SPKSEG_CONFIG_HPP_
#define SPKSEG_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "spkseg/bic.hpp"
#include "spkseg/eval.hpp"
#include "spkseg/pitch_seg.hpp"

namespace spkseg {

struct RunConfig {
  PitchSegConfig seg;  // pitch and MFCC settings live here too
  BicConfig bic;
  std::string method = "pitch";  // pitch | bic-grow | bic-fixed
  double tolerance_s = 0.5;
  std::uint64_t seed = 42;

  // Throws PreconditionError or UsageError on an invalid combination.
  void validate() const;
};

// Every recognized key, in the order used by to_json.
const std::vector<std::string>& config_keys();

// Throws UsageError for an unknown key and FormatError for a value that
// does not parse as the key's type.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

void load_config(RunConfig& cfg, std::istream& in);
// Throws IoError if the file cannot be opened.
void load_config(RunConfig& cfg, const std::filesystem::path& path);

std::string to_json(const RunConfig& cfg);

// Known method names.
const std::vector<std::string>& method_names();

// Throws UsageError for an unknown method.
void check_method(const std::string& method);

// Runs one method end to end on |buffer|, timing the whole call.
SegmentationResult run_method(const AudioBuffer& buffer, const RunConfig& cfg,
                              const std::string& method);

Segmenter make_segmenter(const RunConfig& cfg, const std::string& method);

}  // namespace spkseg

#endif  // SPKSEG_CONFIG_HPP_
