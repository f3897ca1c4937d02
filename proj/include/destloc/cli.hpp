/*
 * Copyright 2026 The destloc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "destloc/synth.hpp"

namespace destloc::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,  // an analysis or I/O step failed
    kUsage = 2,    // bad flags or subcommand
};

/// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Builds a generator spec from its JSON form, e.g.
///   {"model": "cyclic", "period": 30, "length": 10000, "seed": 7}
/// Throws SpecError on unknown models or missing fields.
synth::GeneratorSpec spec_from_json(const std::string& text);

}  // namespace destloc::cli
