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
#include <iosfwd>
#include <map>
#include <string>

#include "nearsel/pipeline.hpp"

namespace nearsel {

// Malformed or incomplete configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Flat `key = value` configuration with domain., map., eps. and run. keys.
// Lines starting with '#' are comments.
struct RunConfig {
  std::string path;        // file the config came from, if any
  std::string base_dir;    // relative domain files resolve against this
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  void set(const std::string& key, const std::string& value);
};

RunConfig parse_config(std::istream& in, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

// Shape literals:
//   ball <center> <radius>
//   polytope <v> <v> ...
//   star center=<c> <v> <v> ...
//   regular_star center=<c> points=<n> outer=<r> inner=<r> [phase=<rad>]
// with points written as comma separated coordinates.
Shape parse_shape(const std::string& literal);
Point parse_point(const std::string& text);
// Rows separated by ';', entries by ','.
SmallMatrix parse_matrix(const std::string& text);
Variant parse_variant(const std::string& text);

// Throws ConfigError for anything that does not describe a valid scenario.
Scenario build_scenario(const RunConfig& cfg);

// Output directory from run.out (default "nearsel_out").
std::string output_dir(const RunConfig& cfg);
bool svg_requested(const RunConfig& cfg);

}  // namespace nearsel
