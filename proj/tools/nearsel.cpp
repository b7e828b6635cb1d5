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

// nearsel: build and certify ε-selections of set-valued maps.
//
//   nearsel run <cfg> [--variant=uv_infty|uv_omega] [--samples=N] [--out=DIR] [--seed=S]
//   nearsel verify <cfg> [--samples=N] ...
//
// Exit codes: 0 clean, 2 config error, 3 stage or certificate failure,
// 4 missing or mismatched artifacts.

#include <iostream>

#include <CLI11.hpp>

#include "nearsel/app.hpp"

namespace {

void add_common(CLI::App* cmd, std::string* config, nearsel::Overrides* o, std::size_t* samples,
                std::uint64_t* seed) {
  cmd->add_option("config", *config, "scenario config file")->required();
  cmd->add_option("--variant", o->variant, "uv_infty (glued) or uv_omega (skeleton filtration)");
  cmd->add_option("--samples", *samples, "verification sample count")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o->out, "output directory");
  cmd->add_option("--seed", *seed, "deterministic seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous ε-selections of set-valued maps over simplicial complexes"};
  app.require_subcommand(1);

  std::string config;
  nearsel::Overrides o;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "build the selection and write artifacts");
  add_common(run, &config, &o, &samples, &seed);
  auto* verify = app.add_subcommand("verify", "re-certify a stored run");
  add_common(verify, &config, &o, &samples, &seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return nearsel::kExitConfig;
  }
  for (auto* cmd : {run, verify}) {
    if (cmd->count("--samples")) o.samples = samples;
    if (cmd->count("--seed")) o.seed = seed;
  }
  if (run->parsed()) return nearsel::run(config, o, std::cout);
  return nearsel::verify(config, o, std::cout);
}
