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

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nearsel/pipeline.hpp"

namespace nearsel {

// Run report as JSON text. Contains no timings, so identical scenarios and
// seeds give identical bytes.
std::string report_json(const Scenario& sc, const SelectionResult& r);
// Report for a run that stopped at `stage`.
std::string failure_report_json(const Scenario& sc, const std::string& stage, const std::string& detail);

// Header `x0..,f0..,dist,eps`; values printed with round-trip precision.
void write_samples_csv(std::ostream& out, const VerificationReport& v);

struct SampleRow {
  Point x;
  Point fx;
  double dist = 0.0;
  double eps = 0.0;
};
// Throws Error on a malformed file.
std::vector<SampleRow> read_samples_csv(std::istream& in, int domain_dim);

// Domain, value-shape outlines at `traces` evenly spaced samples and the
// selected points. Needs a 1D or 2D domain and planar values.
void write_svg(std::ostream& out, const Scenario& sc, const VerificationReport& v, std::size_t traces = 9);
bool svg_supported(const Scenario& sc);

void write_timings(std::ostream& out, const std::map<std::string, double>& prepare_seconds,
                   const std::map<std::string, double>& select_seconds);

}  // namespace nearsel
