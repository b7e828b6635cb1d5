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

#include "nearsel/app.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nearsel/config.hpp"
#include "nearsel/report.hpp"
#include "nearsel/sampling.hpp"

namespace nearsel {
namespace {

namespace fs = std::filesystem;

class ArtifactError : public Error {
 public:
  using Error::Error;
};

RunConfig configure(const std::string& path, const Overrides& o, bool samples_are_run_samples) {
  RunConfig cfg = load_config(path);
  if (o.variant) cfg.set("run.variant", *o.variant);
  if (o.out) cfg.set("run.out", *o.out);
  if (o.seed) cfg.set("run.seed", std::to_string(*o.seed));
  if (o.samples && samples_are_run_samples) cfg.set("run.samples", std::to_string(*o.samples));
  return cfg;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw ArtifactError("cannot write " + p.string());
}

template <class F>
void write_with(const fs::path& p, F&& f) {
  std::ostringstream os;
  f(os);
  write_file(p, os.str());
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ArtifactError("missing artifact " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int run(const std::string& config_path, const Overrides& o, std::ostream& log) {
  std::optional<Scenario> sc;
  fs::path out;
  bool svg = true;
  try {
    const RunConfig cfg = configure(config_path, o, true);
    sc.emplace(build_scenario(cfg));
    out = output_dir(cfg);
    svg = svg_requested(cfg);
  } catch (const Error& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    fs::create_directories(out);
  } catch (const fs::filesystem_error& e) {
    log << "cannot create output directory: " << e.what() << "\n";
    return kExitArtifacts;
  }
  try {
    auto c = std::make_shared<const Construction>(prepare(*sc));
    const SelectionResult r = select(c, *sc, sc->variant);
    write_file(out / "report.json", report_json(*sc, r));
    write_with(out / "samples.csv", [&](std::ostream& os) { write_samples_csv(os, r.verification); });
    write_with(out / "nerve.txt", [&](std::ostream& os) { write_nerve(os, c->nerve.complex, c->nerve.levels); });
    write_with(out / "tower_audit.csv", [&](std::ostream& os) { write_tower_audit_csv(os, c->tower_audit); });
    write_with(out / "families.csv", [&](std::ostream& os) { write_families_csv(os, *c->mat); });
    write_with(out / "timings.csv", [&](std::ostream& os) { write_timings(os, c->seconds, r.seconds); });
    if (svg && svg_supported(*sc)) {
      write_with(out / "selection.svg", [&](std::ostream& os) { write_svg(os, *sc, r.verification); });
    }
    log << "variant " << to_string(r.variant()) << ": " << r.verification.x.size() << " samples, min margin "
        << r.verification.min_margin << ", 0 violations\n";
    log << "artifacts in " << out.string() << "\n";
    return kExitOk;
  } catch (const StageError& e) {
    log << "stage failed: " << e.what() << "\n";
    try {
      write_file(out / "report.json", failure_report_json(*sc, e.stage(), e.what()));
    } catch (const Error&) {
    }
    return kExitStage;
  } catch (const ArtifactError& e) {
    log << e.what() << "\n";
    return kExitArtifacts;
  } catch (const Error& e) {
    log << "stage failed: " << e.what() << "\n";
    return kExitStage;
  }
}

int verify(const std::string& config_path, const Overrides& o, std::ostream& log) {
  std::optional<Scenario> sc;
  fs::path out;
  try {
    const RunConfig cfg = configure(config_path, o, false);
    sc.emplace(build_scenario(cfg));
    out = output_dir(cfg);
  } catch (const Error& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::vector<SampleRow> rows;
  try {
    const auto report = nlohmann::json::parse(read_file(out / "report.json"), nullptr, false);
    if (report.is_discarded() || !report.is_object()) throw ArtifactError("report.json is not valid JSON");
    if (report.value("status", "") != "ok") throw ArtifactError("stored run did not finish cleanly");
    if (report.value("variant", "") != to_string(sc->variant)) {
      throw ArtifactError("stored run used variant " + report.value("variant", std::string("?")));
    }
    const auto& stored = report.at("scenario");
    if (stored.at("seed").get<std::uint64_t>() != sc->seed ||
        stored.at("samples").get<std::size_t>() != sc->samples) {
      throw ArtifactError("stored run used a different seed or sample count");
    }
    std::istringstream csv(read_file(out / "samples.csv"));
    rows = read_samples_csv(csv, sc->domain.ambient_dim());
    if (rows.size() != sc->samples) throw ArtifactError("samples.csv has the wrong number of rows");
  } catch (const nlohmann::json::exception& e) {
    log << "report.json: " << e.what() << "\n";
    return kExitArtifacts;
  } catch (const Error& e) {
    log << e.what() << "\n";
    return kExitArtifacts;
  }

  try {
    auto c = std::make_shared<const Construction>(prepare(*sc));
    const SelectionResult r = select(c, *sc, sc->variant);
    std::size_t mismatched = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const bool same = rows[i].x.size() == c->samples[i].size() && rows[i].x == c->samples[i] &&
                        rows[i].fx.size() == r.verification.fx[i].size() && rows[i].fx == r.verification.fx[i] &&
                        rows[i].dist == r.verification.dist[i] && rows[i].eps == r.verification.eps[i];
      if (!same) {
        if (mismatched == 0) log << "samples.csv row " << i + 1 << " does not match the rebuilt selection\n";
        ++mismatched;
      }
    }
    if (mismatched > 0) {
      log << mismatched << " stored rows differ\n";
      return kExitArtifacts;
    }
    log << "stored samples match: " << rows.size() << " rows\n";
    if (o.samples) {
      const auto fresh = domain_samples(sc->domain, *o.samples, sc->seed ^ 0xfe5bULL);
      const VerificationReport v =
          verify_selection([&r](const Point& x) { return r(x); }, sc->phi, sc->eps, fresh);
      log << "fresh grid: " << fresh.size() << " samples, min margin " << v.min_margin << ", "
          << v.violations.size() << " violations\n";
      if (!v.ok()) return kExitStage;
    }
    return kExitOk;
  } catch (const Error& e) {
    log << "stage failed: " << e.what() << "\n";
    return kExitStage;
  }
}

}  // namespace nearsel
