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
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nearsel/cover_tower.hpp"
#include "nearsel/homotopy.hpp"
#include "nearsel/nerve.hpp"
#include "nearsel/refinement.hpp"

namespace nearsel {

struct Scenario {
  DomainComplex domain;
  SetValuedMap phi;
  UvWitness witness;
  EpsFunction eps;
  Variant variant = Variant::kGlued;
  std::size_t samples = 10000;        // verification points
  int tower_depth = 0;                // 0 means m + 1
  std::uint64_t seed = 1;
  int max_fine_depth = kMaxRefineDepth;
  std::size_t element_samples = 16;   // star points per element in the refinement audit
  std::size_t homotopy_points = 2;    // points per simplex in the homotopy audit
};

// A stage audit failed; `stage` names it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& detail)
      : Error(stage + ": " + detail), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct VerificationReport {
  std::vector<Point> x;
  std::vector<Point> fx;
  std::vector<double> dist;
  std::vector<double> eps;
  double min_margin = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> violations;  // indices with dist >= eps
  // |f(x_i) - f(x_{i+1})| over consecutive samples closer than the grid step;
  // reported, not asserted.
  double max_adjacent_jump = 0.0;
  bool ok() const { return violations.empty() && min_margin > 0.0; }
};

using Selector = std::function<Point(const Point&)>;

// Margins ε(x) - dist(f(x), φ(x)) at every sample.
VerificationReport verify_selection(const Selector& f, const SetValuedMap& phi, const EpsFunction& eps,
                                    std::span<const Point> samples);

// Everything up to the nerve map: tower, refinement, materialized nerve,
// orientation, filtration and the contraction table, plus their audits.
struct Construction {
  std::shared_ptr<const Tower> tower;
  std::shared_ptr<const RefinementSystem> sys;
  std::shared_ptr<Materialization> mat;
  std::shared_ptr<TowerRegistry> registry;
  MaterializedNerve nerve;
  std::shared_ptr<const OrientedComplex> oriented;
  std::shared_ptr<const SkeletonFiltration> filtration;
  std::shared_ptr<const ContractionTable> table;
  std::vector<Point> samples;
  TowerAudit tower_audit;
  RefinementAudit refinement_audit;
  FiltrationCheck filtration_check;
  double transport_slack = 0.0;
  std::map<std::string, double> seconds;

  // Table entry for a star element (Φ = O_δn, Ψ = O_εn of φ at r_n's anchor).
  TableEntry entry_for(const StarElement& e) const;
};

Construction prepare(const Scenario& sc);

class SelectionResult {
 public:
  SelectionResult(std::shared_ptr<const Construction> c, NerveMap h);

  // f(x) = h(g(x)). Supports outside the materialized nerve are evaluated
  // on the closure of their chain with the same construction.
  Point operator()(const Point& x) const;
  NervePoint g(const Point& x) const;

  const Construction& construction() const { return *c_; }
  const NerveMap& h() const { return h_; }
  Variant variant() const { return h_.variant(); }

  HomotopyAudit homotopy_audit;
  VerificationReport verification;
  std::map<std::string, double> seconds;

 private:
  std::shared_ptr<const Construction> c_;
  NerveMap h_;
};

// Builds h for the variant, audits it and certifies f at the samples.
// Throws StageError on any failed audit.
SelectionResult select(std::shared_ptr<const Construction> c, const Scenario& sc, Variant variant);

// Glued construction (uniformly UV^∞ values).
SelectionResult select_c_space(const Scenario& sc);
// Filtration construction (uniformly UV^ω values).
SelectionResult select_finite_c(const Scenario& sc);

}  // namespace nearsel
