// Copyright 2026 The nearsel Authors.
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

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace nearsel {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,     // malformed or invalid configuration
  kExitStage = 3,      // a stage audit or the certificate failed
  kExitArtifacts = 4,  // missing, unwritable or mismatched artifacts
};

// Command line values that take precedence over the config file.
struct Overrides {
  std::optional<std::string> variant;
  std::optional<std::size_t> samples;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

// Builds the selection and writes report.json, samples.csv, nerve.txt,
// tower_audit.csv, families.csv, timings.csv and, for planar scenarios,
// selection.svg into the output directory.
int run(const std::string& config_path, const Overrides& o, std::ostream& log);

// Rebuilds the selection from the config, checks the stored samples against
// it and, when `o.samples` is set, certifies that many fresh points.
int verify(const std::string& config_path, const Overrides& o, std::ostream& log);

}  // namespace nearsel
