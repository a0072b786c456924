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

// Command-line front end: pitch, segment, evaluate, bench and synth.

#ifndef SPKSEG_CLI_HPP_
#define SPKSEG_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace spkseg {

// args excludes the program name. Returns the process exit code:
// 0 success, 1 usage, 2 I/O, 3 format or validation, 4 precondition.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace spkseg

#endif  // SPKSEG_CLI_HPP_
