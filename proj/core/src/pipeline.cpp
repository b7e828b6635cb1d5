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

#include "nearsel/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "nearsel/sampling.hpp"

namespace nearsel {
namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

template <class F>
auto in_stage(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e.what());
  }
}

NerveMap build_map(Variant variant, std::shared_ptr<const OrientedComplex> o,
                   std::shared_ptr<const SkeletonFiltration> f,
                   std::shared_ptr<const ContractionTable> table) {
  if (variant == Variant::kGlued) return glue(std::move(o), std::move(table));
  return skeleton_extend(std::move(o), std::move(f), std::move(table));
}

}  // namespace

VerificationReport verify_selection(const Selector& f, const SetValuedMap& phi, const EpsFunction& eps,
                                    std::span<const Point> samples) {
  VerificationReport r;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Point& x = samples[i];
    const Point y = f(x);
    const double d = dist_point_shape(y, phi(x));
    const double e = eps(x);
    r.x.push_back(x);
    r.fx.push_back(y);
    r.dist.push_back(d);
    r.eps.push_back(e);
    r.min_margin = std::min(r.min_margin, e - d);
    if (!(d < e)) r.violations.push_back(i);
  }
  double step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double h = (samples[i + 1] - samples[i]).norm();
    if (h > 0.0) step = std::min(step, h);
  }
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    if ((samples[i + 1] - samples[i]).norm() <= 1.01 * step) {
      r.max_adjacent_jump = std::max(r.max_adjacent_jump, (r.fx[i + 1] - r.fx[i]).norm());
    }
  }
  return r;
}

TableEntry Construction::entry_for(const StarElement& e) const {
  const TowerLevel& lv = tower->level(e.level);
  const Shape base = tower->value(e.target);
  TableEntry entry{tower->witness().contraction_for(base, lv.delta, lv.eps), Inflated{base, lv.eps}, -1};
  const std::int64_t idx = registry ? registry->index_of(e.target) : -1;
  if (idx >= 0) entry.tag = (static_cast<std::int64_t>(e.level) << 40) | idx;
  return entry;
}

Construction prepare(const Scenario& sc) {
  Construction c;
  Stopwatch sw;
  const DomainComplex& k = sc.domain;
  in_stage("scenario", [&] {
    if (k.empty()) throw Error("empty domain");
    if (sc.phi.domain_dim() != k.ambient_dim()) throw DimensionMismatch(k.ambient_dim(), sc.phi.domain_dim());
    sc.eps.min_on(k);
    if (sc.samples == 0) throw Error("need at least one verification sample");
    return 0;
  });
  const int depth = sc.tower_depth > 0 ? sc.tower_depth : k.dimension() + 1;
  c.tower = in_stage("tower", [&] {
    return std::make_shared<const Tower>(build_tower(sc.phi, sc.witness, sc.eps, k, depth));
  });
  c.seconds["tower"] = sw.lap();

  c.sys = in_stage("refinement", [&] {
    return std::make_shared<const RefinementSystem>(disjoint_refinements(c.tower, sc.max_fine_depth));
  });
  c.samples = domain_samples(k, sc.samples, sc.seed);
  c.mat = std::make_shared<Materialization>(*c.sys);
  in_stage("refinement", [&] {
    for (const auto& x : c.samples) c.mat->touch(x);
    return 0;
  });
  c.registry = std::make_shared<TowerRegistry>(*c.tower);
  in_stage("tower", [&] {
    c.mat->register_targets(*c.registry);
    return 0;
  });
  c.seconds["refinement"] = sw.lap();

  c.tower_audit = in_stage("tower", [&] { return audit_tower(*c.tower, *c.registry, c.samples); });
  std::string failure;
  if (!c.tower_audit.ok(1e-9, &failure)) throw StageError("tower", failure);
  c.seconds["tower_audit"] = sw.lap();

  c.refinement_audit = in_stage("refinement", [&] {
    return audit_refinement(*c.mat, c.samples, sc.element_samples, sc.seed ^ 0x5eedULL);
  });
  if (!c.refinement_audit.ok()) {
    const auto& a = c.refinement_audit;
    throw StageError("refinement", "uncovered " + std::to_string(a.uncovered) + ", disjointness violations " +
                                       std::to_string(a.disjointness_violations) + ", containment slack " +
                                       fmt(a.min_containment_slack) + ", certificate slack " +
                                       fmt(a.min_certificate_slack));
  }
  c.seconds["refinement_audit"] = sw.lap();

  c.nerve = in_stage("nerve", [&] { return nerve(*c.mat); });
  if (c.nerve.confirmation_failures > 0) {
    throw StageError("nerve", std::to_string(c.nerve.confirmation_failures) + " chains failed confirmation");
  }
  c.oriented = in_stage("nerve", [&] {
    return std::make_shared<const OrientedComplex>(orient_by_level(c.nerve.complex, c.nerve.levels));
  });
  c.filtration = std::make_shared<const SkeletonFiltration>(filtration(*c.oriented));
  c.filtration_check = check_filtration(*c.oriented, *c.filtration);
  if (!c.filtration_check.ok()) throw StageError("nerve", c.filtration_check.failures.front());
  c.seconds["nerve"] = sw.lap();

  c.table = in_stage("witness", [&] {
    auto table = std::make_shared<ContractionTable>();
    for (std::size_t id = 0; id < c.mat->elements().size(); ++id) {
      table->set(static_cast<int>(id), c.entry_for(c.mat->elements()[id]));
    }
    return std::shared_ptr<const ContractionTable>(std::move(table));
  });
  c.transport_slack = in_stage("transport", [&] { return check_transport(*c.oriented, *c.table); });
  c.seconds["table"] = sw.lap();
  return c;
}

SelectionResult::SelectionResult(std::shared_ptr<const Construction> c, NerveMap h)
    : c_(std::move(c)), h_(std::move(h)) {}

NervePoint SelectionResult::g(const Point& x) const { return canonical_map(*c_->mat, x); }

Point SelectionResult::operator()(const Point& x) const {
  const CanonicalChain chain = c_->sys->chain_at(x);
  bool known = true;
  for (const auto& f : chain.faces) known = known && c_->mat->element_id(f) >= 0;
  if (known) {
    const NervePoint q = to_nerve_point(*c_->mat, chain);
    if (c_->oriented->complex().contains(q.simplex)) return h_(q);
  }
  // Local complex: the closure of x's support chain.
  auto table = std::make_shared<ContractionTable>();
  std::map<int, int> levels;
  Simplex sigma;
  for (std::size_t i = 0; i < chain.faces.size(); ++i) {
    const StarElement e = c_->sys->element(chain.faces[i]);
    table->set(static_cast<int>(i), c_->entry_for(e));
    levels[static_cast<int>(i)] = e.level;
    sigma.push_back(static_cast<int>(i));
  }
  auto o = std::make_shared<const OrientedComplex>(orient_by_level(AbstractComplex({sigma}), levels));
  auto f = std::make_shared<const SkeletonFiltration>(filtration(*o));
  const NerveMap local = build_map(h_.variant(), o, f, table);
  return local(NervePoint{sigma, chain.weights});
}

SelectionResult select(std::shared_ptr<const Construction> c, const Scenario& sc, Variant variant) {
  Stopwatch sw;
  NerveMap h = in_stage("transport", [&] { return build_map(variant, c->oriented, c->filtration, c->table); });
  SelectionResult r(c, std::move(h));
  r.homotopy_audit = in_stage("homotopy", [&] {
    return audit_homotopy(*c->oriented, *c->table, r.h(), sc.homotopy_points, sc.seed ^ 0xab5ULL);
  });
  const auto& ha = r.homotopy_audit;
  if (ha.vertex_mismatches > 0 || !(ha.max_face_gap <= 1e-12) || !(ha.min_containment_slack > 0.0)) {
    throw StageError("homotopy", "vertex mismatches " + std::to_string(ha.vertex_mismatches) + ", face gap " +
                                     fmt(ha.max_face_gap) + ", containment slack " +
                                     fmt(ha.min_containment_slack) + " at " + ha.worst);
  }
  r.seconds["homotopy"] = sw.lap();
  r.verification = verify_selection([&r](const Point& x) { return r(x); }, c->tower->phi(), c->tower->eps(),
                                    c->samples);
  r.seconds["certificate"] = sw.lap();
  if (!r.verification.ok()) {
    throw StageError("certificate", std::to_string(r.verification.violations.size()) +
                                        " violations, min margin " + fmt(r.verification.min_margin));
  }
  return r;
}

SelectionResult select_c_space(const Scenario& sc) {
  auto c = std::make_shared<const Construction>(prepare(sc));
  return select(c, sc, Variant::kGlued);
}

SelectionResult select_finite_c(const Scenario& sc) {
  auto c = std::make_shared<const Construction>(prepare(sc));
  return select(c, sc, Variant::kSkeleton);
}

}  // namespace nearsel
