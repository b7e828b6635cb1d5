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

#include <doctest.h>

#include <cmath>

#include "nearsel/pipeline.hpp"
#include "nearsel/sampling.hpp"

using namespace nearsel;

namespace {

DomainComplex unit_segment() { return DomainComplex(1, {make_point({0}), make_point({1})}, {{0, 1}}); }
DomainComplex unit_square() {
  return DomainComplex(2, {make_point({0, 0}), make_point({1, 0}), make_point({1, 1}), make_point({0, 1})},
                       {{0, 1, 2}, {0, 2, 3}});
}

Scenario make_scenario(DomainComplex k, SetValuedMap phi, double eps, std::size_t samples) {
  UvWitness w = straight_line_witness(phi);
  Scenario sc{std::move(k), std::move(phi), std::move(w), EpsFunction::constant(eps)};
  sc.samples = samples;
  sc.seed = 3;
  return sc;
}

Scenario translating_disk(std::size_t samples) {
  SmallMatrix v(2, 1);
  v << 1, 0;
  return make_scenario(unit_segment(), SetValuedMap::translating(Shape::ball(make_point({0, 0}), 1.0), v), 0.3,
                       samples);
}

Scenario rotating_star(std::size_t samples) {
  return make_scenario(unit_square(),
                       SetValuedMap::rotating_star(Shape::regular_star(make_point({0.5, 0}), 5, 1.0, 0.4),
                                                   make_point({0, 0}), 0.0, make_point({1, 0.5})),
                       0.5, samples);
}

}  // namespace

TEST_CASE("verify_selection") {
  const auto phi = SetValuedMap::constant(1, Shape::ball(make_point({0, 0}), 1.0));
  const EpsFunction eps = EpsFunction::constant(0.25);
  const auto samples = domain_samples(unit_segment(), 50, 1);
  const VerificationReport inside =
      verify_selection([](const Point& x) { return make_point({0.5 * x[0], 0}); }, phi, eps, samples);
  CHECK(inside.ok());
  CHECK(inside.min_margin == 0.25);
  for (double d : inside.dist) CHECK(d == 0.0);
  CHECK(inside.max_adjacent_jump > 0.0);

  const VerificationReport far =
      verify_selection([](const Point&) { return make_point({5, 5}); }, phi, eps, samples);
  CHECK_FALSE(far.ok());
  CHECK(far.violations.size() == samples.size());
  CHECK(far.min_margin < 0.0);
}

TEST_CASE("constant map selects the star centre") {
  Scenario sc = make_scenario(unit_square(),
                              SetValuedMap::constant(2, Shape::regular_star(make_point({0.3, 0.1}), 5, 1.0, 0.4)),
                              0.2, 300);
  const SelectionResult a = select_c_space(sc);
  const SelectionResult b = select_finite_c(sc);
  for (const auto& x : a.construction().samples) {
    CHECK((a(x) - make_point({0.3, 0.1})).norm() < 1e-12);
    CHECK((b(x) - make_point({0.3, 0.1})).norm() < 1e-12);
  }
}

TEST_CASE("translating disk on [0,1]") {
  const Scenario sc = translating_disk(2000);
  const SelectionResult r = select_c_space(sc);
  CHECK(r.variant() == Variant::kGlued);
  CHECK(r.verification.ok());
  CHECK(r.verification.violations.empty());
  CHECK(r.verification.x.size() == 2000);
  // Independent distance oracle: dist to a disk is |y - c| - r clipped at 0.
  for (std::size_t i = 0; i < r.verification.x.size(); ++i) {
    const Point& x = r.verification.x[i];
    const Point c = make_point({x[0], 0});
    const double d = std::max(0.0, (r.verification.fx[i] - c).norm() - 1.0);
    CHECK(d < 0.3);
  }
  const SelectionResult s = select_finite_c(sc);
  CHECK(s.verification.ok());
}

TEST_CASE("rotating star on the square, both variants agree") {
  const Scenario sc = rotating_star(1500);
  auto c = std::make_shared<const Construction>(prepare(sc));
  const SelectionResult a = select(c, sc, Variant::kGlued);
  const SelectionResult b = select(c, sc, Variant::kSkeleton);
  CHECK(a.verification.ok());
  CHECK(b.verification.ok());
  double gap = 0.0;
  for (std::size_t i = 0; i < c->samples.size(); ++i) {
    gap = std::max(gap, (a.verification.fx[i] - b.verification.fx[i]).norm());
  }
  CHECK(gap < 1e-12);

  CHECK(c->transport_slack >= -1e-12);
  CHECK(c->filtration_check.ok());
  CHECK(c->tower_audit.ok());
  CHECK(c->refinement_audit.ok());

  // Support correctness: x lies in every support star's r_n target.
  for (std::size_t i = 0; i < c->samples.size(); i += 7) {
    const Point& x = c->samples[i];
    const NervePoint q = a.g(x);
    for (int v : q.simplex) CHECK(c->tower->contains(c->mat->elements()[static_cast<std::size_t>(v)].target, x));
  }

  // Points off the materialized nerve go through the local complex.
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const Point x = random_domain_point(sc.domain, rng);
    CHECK(dist_point_shape(a(x), sc.phi(x)) < 0.5);
    CHECK((a(x) - b(x)).norm() < 1e-12);
  }
}

TEST_CASE("stage failures name the stage") {
  Scenario tiny = translating_disk(100);
  tiny.eps = EpsFunction::constant(1e-14);
  try {
    prepare(tiny);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "tower");
  }

  Scenario shallow = translating_disk(100);
  shallow.max_fine_depth = 1;
  try {
    prepare(shallow);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "refinement");
  }

  Scenario empty = translating_disk(0);
  CHECK_THROWS_AS(prepare(empty), StageError);
}

TEST_CASE("prepare is deterministic") {
  const Scenario sc = translating_disk(500);
  const SelectionResult a = select_c_space(sc);
  const SelectionResult b = select_c_space(sc);
  CHECK(a.verification.fx == b.verification.fx);
  CHECK(a.construction().nerve.complex.simplices() == b.construction().nerve.complex.simplices());
}
