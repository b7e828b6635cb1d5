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
#include <set>
#include <sstream>

#include "nearsel/cover_tower.hpp"
#include "nearsel/sampling.hpp"

using namespace nearsel;

namespace {

DomainComplex unit_segment() { return DomainComplex(1, {make_point({0}), make_point({1})}, {{0, 1}}); }
DomainComplex unit_square() {
  return DomainComplex(2, {make_point({0, 0}), make_point({1, 0}), make_point({1, 1}), make_point({0, 1})},
                       {{0, 1, 2}, {0, 2, 3}});
}

SmallMatrix column(std::initializer_list<double> v) {
  SmallMatrix a(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) a(i++, 0) = x;
  return a;
}

SetValuedMap translating_disk_1d() {
  return SetValuedMap::translating(Shape::ball(make_point({0, 0}), 1.0), column({1, 0}));
}

TowerRegistry registry_for(const Tower& t, std::span<const Point> samples) {
  TowerRegistry reg(t);
  for (int n = 0; n < t.depth(); ++n) {
    for (const auto& x : samples) reg.add(t.element_at(n, x));
  }
  return reg;
}

const SlackStat* find_stat(const TowerAudit& a, const std::string& name, int level) {
  for (const auto& s : a.stats) {
    if (s.name == name && s.level == level) return &s;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("epsilon functions") {
  const DomainComplex k = unit_square();
  CHECK(EpsFunction::constant(0.3)(make_point({0.5, 0.5})) == 0.3);
  CHECK_THROWS_AS(EpsFunction::constant(0.0), Error);
  const EpsFunction a = EpsFunction::affine(1.0, make_point({1, -0.5}));
  CHECK(a(make_point({1, 1})) == 1.5);
  CHECK(a.lipschitz() == doctest::Approx(std::sqrt(1.25)));
  CHECK(a.min_on(k) == 0.5);
  CHECK_THROWS_AS(EpsFunction::affine(0.2, make_point({0, -1})).min_on(k), Error);
}

TEST_CASE("bound_delta") {
  // Constant 0.8: half the value.
  CHECK(bound_delta(EpsFunction::constant(0.8), make_point({0.3}), 0.2) == doctest::Approx(0.4));
  // 1 + x on a radius 0.1 ball at 0.5: (1.5 - 0.1) / 2.
  const EpsFunction e = EpsFunction::affine(1.0, make_point({1}));
  const double d = bound_delta(e, make_point({0.5}), 0.1);
  CHECK(d == doctest::Approx(0.7));
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) CHECK(d <= e(make_point({rng.uniform(0.4, 0.6)})));
  CHECK_THROWS_AS(bound_delta(EpsFunction::affine(0.1, make_point({1})), make_point({0}), 0.2), Error);
}

TEST_CASE("bound_function_cover") {
  const DomainComplex k = unit_square();
  const BoundCover c = bound_function_cover(EpsFunction::constant(1.0), k);
  for (double d : c.delta) CHECK(d == 0.5);

  const EpsFunction steep = EpsFunction::affine(0.05, make_point({2, 1}));
  const BoundCover s = bound_function_cover(steep, k);
  CHECK(s.depth > 0);
  Rng rng(2);
  for (int i = 0; i < 2000; ++i) {
    const Point x = random_domain_point(k, rng);
    bool covered = false;
    for (std::size_t j = 0; j < s.anchors.size(); ++j) {
      if ((x - s.anchors[j]).norm() < s.radius) {
        covered = true;
        CHECK(s.delta[j] <= steep(x));
      }
    }
    CHECK(covered);
  }
}

TEST_CASE("local_uv_level") {
  const DomainComplex k = unit_square();
  const auto constant = SetValuedMap::constant(2, Shape::ball(make_point({0, 0}), 1));
  const LocalUv c = local_uv_level(constant, straight_line_witness(constant), 0.8, make_point({0, 0}), k);
  CHECK(c.delta == doctest::Approx(0.1));
  CHECK(c.radius == doctest::Approx(std::sqrt(2.0)));

  const DomainComplex seg = unit_segment();
  const auto phi = translating_disk_1d();
  const LocalUv t = local_uv_level(phi, straight_line_witness(phi), 0.8, make_point({0.5}), seg);
  CHECK(t.delta == doctest::Approx(0.1));
  CHECK(t.radius < 0.0125);
  CHECK(t.radius > 0.0);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Point p = make_point({0.5 + rng.uniform(-t.radius, t.radius)});
    const Point q = make_point({0.5 + rng.uniform(-t.radius, t.radius)});
    CHECK(hausdorff(phi(p), phi(q)) < t.delta / 2.0);
  }

  const auto scaled = SetValuedMap(MapKind::kCustom, 1,
                                   [](const Point& x) { return Shape::ball(make_point({0, 0}), 1.0 + 2.0 * x[0]); },
                                   Modulus::lipschitz(2.0));
  const LocalUv s = local_uv_level(scaled, straight_line_witness(scaled), 1.0, make_point({0}), seg);
  CHECK(s.delta == doctest::Approx(0.125));
  CHECK(s.radius < 0.0078125);
}

TEST_CASE("refine_level") {
  const DomainComplex k = unit_segment();
  const auto phi = translating_disk_1d();
  TowerLevel prev;
  prev.index = 0;
  prev.eps = 0.9;
  prev.delta = 0.3;
  prev.radius = 0.1;
  const TowerLevel next = refine_level(prev, phi, straight_line_witness(phi), k);
  CHECK(next.index == 1);
  CHECK(next.eps <= 0.1 + 1e-15);
  CHECK(next.delta <= next.eps);
  CHECK(next.radius <= prev.radius / 4.0);
}

TEST_CASE("build_tower preconditions") {
  const auto phi = SetValuedMap::translating(Shape::ball(make_point({0, 0}), 1.0), SmallMatrix::Identity(2, 2));
  CHECK_THROWS_AS(build_tower(phi, straight_line_witness(phi), EpsFunction::constant(0.3), unit_square(), 2), Error);
  CHECK_THROWS_AS(build_tower(translating_disk_1d(), straight_line_witness(phi), EpsFunction::constant(0.3),
                              unit_square(), 3),
                  DimensionMismatch);
}

TEST_CASE("translating disk tower audits clean") {
  const DomainComplex k = unit_segment();
  const auto phi = translating_disk_1d();
  const Tower t = build_tower(phi, straight_line_witness(phi), EpsFunction::constant(0.3), k, 3);
  const auto samples = domain_samples(k, 1000, 5);
  const TowerRegistry reg = registry_for(t, samples);
  const TowerAudit audit = audit_tower(t, reg, samples);
  std::string failure;
  CHECK_MESSAGE(audit.ok(1e-9, &failure), failure);
  CHECK(audit.min_slack() >= -1e-9);
  REQUIRE(find_stat(audit, "inclusion_ii 2>0", 0) != nullptr);
  CHECK(find_stat(audit, "inclusion_ii 2>0", 0)->checks > 0);

  // Adjacent elements of consecutive levels, checked directly.
  for (const auto& v : reg.level(1)) {
    for (const TowerElement* u : reg.near(0, v.anchor, t.level(1).radius)) {
      CHECK(directed_hausdorff(t.value(v), t.value(*u)) + t.level(1).eps <= t.level(0).delta + 1e-9);
    }
  }

  std::ostringstream csv;
  write_tower_audit_csv(csv, audit);
  CHECK(csv.str().rfind("inequality,level,checks,min_slack,strict,worst\n", 0) == 0);
}

TEST_CASE("constant map: inclusion (ii) reduces to the epsilon chain") {
  const DomainComplex k = unit_square();
  const auto phi = SetValuedMap::constant(2, Shape::regular_star(make_point({0, 0}), 5, 1, 0.4));
  const Tower t = build_tower(phi, straight_line_witness(phi), EpsFunction::constant(0.5), k, 4);
  for (int n = 0; n < t.depth(); ++n) {
    for (int j = n + 1; j < t.depth(); ++j) CHECK(t.level(j).eps <= t.level(n).delta / 3.0);
  }
  const auto samples = domain_samples(k, 200, 6);
  const TowerAudit audit = audit_tower(t, registry_for(t, samples), samples);
  CHECK(audit.ok());
  const SlackStat* incl = find_stat(audit, "inclusion_ii 3>0", 0);
  REQUIRE(incl != nullptr);
  CHECK(incl->min_slack == doctest::Approx(t.level(0).delta - t.level(3).eps));
}

TEST_CASE("property: tower invariants on a scaling map") {
  const DomainComplex k = unit_square();
  SmallMatrix v(2, 2);
  v << 0.3, 0, 0, 0.3;
  const auto phi = SetValuedMap::scaling(
      Shape::convex_polytope({make_point({0, 0}), make_point({1, 0}), make_point({0.5, 1})}), 1.0,
      make_point({0.5, 0.5}), v);
  const EpsFunction eps = EpsFunction::affine(0.3, make_point({0.1, -0.1}));
  const Tower t = build_tower(phi, straight_line_witness(phi), eps, k, 3);
  for (const auto& lv : t.levels()) CHECK(lv.delta <= lv.eps);
  const auto samples = domain_samples(k, 10000, 7);
  const TowerRegistry reg = registry_for(t, samples);
  // Every sample lies in an element of every level.
  for (int n = 0; n < t.depth(); ++n) {
    std::size_t inside = 0;
    for (const auto& x : samples) inside += t.contains(t.element_at(n, x), x) ? 1 : 0;
    CHECK(inside == samples.size());
  }
  // Epsilon chain along stored links.
  for (int j = 1; j < t.depth(); ++j) {
    for (const auto& e : reg.level(j)) {
      TowerElement cur = e;
      while (cur.level > 0) {
        const TowerElement up = t.parent(cur);
        CHECK(t.level(e.level).eps <= t.level(up.level).delta / 3.0);
        cur = up;
      }
    }
  }
  const TowerAudit audit = audit_tower(t, reg, std::span<const Point>(samples).first(500));
  for (const auto& s : audit.stats) {
    if (s.name.rfind("triangle", 0) == 0) CHECK(s.min_slack > 0.0);
  }
  CHECK(audit.ok());
}

TEST_CASE("registry") {
  const DomainComplex k = unit_segment();
  const auto phi = translating_disk_1d();
  const Tower t = build_tower(phi, straight_line_witness(phi), EpsFunction::constant(0.3), k, 2);
  TowerRegistry reg(t);
  const TowerElement e = t.element_at(1, make_point({0.37}));
  reg.add(e);
  reg.add(e);
  CHECK(reg.level(1).size() == 1);
  CHECK(reg.level(0).size() == 1);  // parent registered too
  CHECK(reg.index_of(e) == 0);
  CHECK(reg.index_of(t.element_at(1, make_point({0.9}))) == -1);

  Rng rng(8);
  for (int i = 0; i < 300; ++i) reg.add(t.element_at(0, random_domain_point(k, rng)));
  for (int i = 0; i < 50; ++i) {
    const Point x = random_domain_point(k, rng);
    const double r = rng.uniform(0, 0.01);
    std::set<const TowerElement*> got;
    for (const auto* u : reg.near(0, x, r)) got.insert(u);
    for (const auto& u : reg.level(0)) {
      if ((u.anchor - x).norm() < t.level(0).radius + r) CHECK(got.count(&u) == 1);
    }
  }
}
