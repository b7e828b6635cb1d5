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
#include <numbers>
#include <utility>

#include "nearsel/mapping.hpp"
#include "nearsel/sampling.hpp"

using namespace nearsel;

namespace {

DomainComplex unit_square() {
  return DomainComplex(2, {make_point({0, 0}), make_point({1, 0}), make_point({1, 1}), make_point({0, 1})},
                       {{0, 1, 2}, {0, 2, 3}});
}

SmallMatrix mat(int rows, int cols, std::initializer_list<double> v) {
  SmallMatrix a(rows, cols);
  auto it = v.begin();
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a(i, j) = *it++;
  }
  return a;
}

Shape unit_square_shape() {
  return Shape::convex_polytope({make_point({0, 0}), make_point({1, 0}), make_point({1, 1}), make_point({0, 1})});
}

SetValuedMap translating_disk() {
  return SetValuedMap::translating(Shape::ball(make_point({0, 0}), 1.0), mat(2, 2, {1, 0, 0, 0}));
}

std::vector<std::pair<Point, Point>> random_pairs(const DomainComplex& k, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < n; ++i) pairs.emplace_back(random_domain_point(k, rng), random_domain_point(k, rng));
  return pairs;
}

}  // namespace

TEST_CASE("eval_map examples") {
  const DomainComplex k = unit_square();
  const Shape v = eval_map(translating_disk(), k, make_point({0.3, 0}));
  CHECK((v.as_ball()->center - make_point({0.3, 0})).norm() == 0.0);
  CHECK(v.as_ball()->radius == 1.0);
  CHECK_THROWS_AS(eval_map(translating_disk(), k, make_point({2, 0})), Error);

  const auto scaling = SetValuedMap::scaling(unit_square_shape(), 1.0, make_point({1, 0}), mat(2, 2, {0, 0, 0, 0}));
  const Shape big = eval_map(scaling, k, make_point({1, 0}));
  const Shape side2 = Shape::convex_polytope({make_point({0, 0}), make_point({2, 0}), make_point({2, 2}), make_point({0, 2})});
  CHECK(hausdorff(big, side2) < 1e-12);

  const Shape star = Shape::regular_star(make_point({0.5, 0}), 5, 1.0, 0.4);
  const auto rot = SetValuedMap::rotating_star(star, make_point({0, 0}), 0.0, make_point({std::numbers::pi / 2, 0}));
  const Shape turned = eval_map(rot, k, make_point({1, 0}));
  Eigen::Matrix2d r;
  r << 0, -1, 1, 0;
  const auto& before = star.as_star()->vertices;
  const auto& after = turned.as_star()->vertices;
  REQUIRE(before.size() == after.size());
  for (std::size_t i = 0; i < before.size(); ++i) {
    const Eigen::Vector2d expect = r * Eigen::Vector2d(before[i][0], before[i][1]);
    CHECK(std::abs(after[i][0] - expect[0]) < 1e-12);
    CHECK(std::abs(after[i][1] - expect[1]) < 1e-12);
  }
}

TEST_CASE("map construction errors") {
  CHECK_THROWS_AS(SetValuedMap::translating(Shape::ball(make_point({0, 0}), 1), mat(3, 1, {1, 2, 3})),
                  DimensionMismatch);
  CHECK_THROWS_AS(Modulus::lipschitz(-1.0), Error);
  CHECK_THROWS_AS(SetValuedMap::rotating_star(Shape::ball(make_point({0, 0, 0}), 1), make_point({0, 0, 0}), 0,
                                              make_point({1})),
                  Error);
  // Scale factor 1 - 2x vanishes inside [0,1].
  const auto shrink = SetValuedMap::scaling(unit_square_shape(), 1.0, make_point({-2}), mat(2, 1, {0, 0}));
  CHECK_THROWS_AS(shrink(make_point({0.9})), Error);
}

TEST_CASE("straight-line witness") {
  const auto phi = SetValuedMap::constant(2, Shape::regular_star(make_point({0, 0}), 5, 1.0, 0.4));
  const UvWitness w = straight_line_witness(phi);
  CHECK(w.delta_of(0.4) == 0.2);
  const Shape s = phi(make_point({0, 0}));
  const Contraction h = w.contraction_for(s, 0.1, 0.2);
  CHECK(h.target() == make_point({0, 0}));
  for (double t : {0.0, 0.3, 1.0}) CHECK(h(make_point({0, 0}), t) == make_point({0, 0}));
  CHECK((h(make_point({2, 0}), 0.5) - make_point({1, 0})).norm() < 1e-15);
  const Point y = make_point({0.123456789, -0.3});
  CHECK(h(y, 0.0) == y);
  CHECK(h(y, 1.0) == h.target());
  CHECK(h(y, 0.0) == h(y, 0.0));

  const auto bad = SetValuedMap::constant(
      2, Shape::star_polygon_unchecked({make_point({0, 0}), make_point({3, 0}), make_point({3, 1}), make_point({1, 1}),
                                        make_point({1, 2}), make_point({3, 2}), make_point({3, 3}), make_point({0, 3})},
                                       make_point({2.5, 0.5})));
  CHECK_THROWS_AS(straight_line_witness(bad).contraction_for(bad(make_point({0, 0})), 0.1, 0.2), Error);
}

TEST_CASE("property: straight-line contraction stays in the eps-neighbourhood") {
  Rng rng(31);
  const Shape s = Shape::regular_star(make_point({0.2, -0.1}), 7, 1.3, 0.35, 0.4);
  const auto phi = SetValuedMap::constant(2, s);
  const UvWitness w = straight_line_witness(phi);
  const double eps = 0.25, delta = w.delta_of(eps);
  const Contraction h = w.contraction_for(s, delta, eps);
  int tested = 0;
  while (tested < 1000) {
    const Point y = make_point({rng.uniform(-1.7, 1.7), rng.uniform(-1.7, 1.7)});
    if (!in_neighborhood(y, s, delta)) continue;
    ++tested;
    CHECK(in_neighborhood(h(y, rng.uniform()), s, eps));
  }
}

TEST_CASE("check_continuity") {
  const DomainComplex k = unit_square();
  const auto pairs = random_pairs(k, 1000, 37);
  const auto constant = SetValuedMap::constant(2, unit_square_shape());
  CHECK(check_continuity(constant, pairs).max_slack <= 0.0);

  const ContinuityReport ok = check_continuity(translating_disk(), pairs);
  CHECK(ok.pairs == 1000);
  CHECK(ok.max_slack <= 1e-9);
  CHECK_FALSE(ok.flagged);

  const SetValuedMap tight(MapKind::kCustom, 2, [](const Point& x) { return translating_disk()(x); },
                           Modulus::lipschitz(0.1), "wrong modulus");
  const ContinuityReport flagged = check_continuity(tight, pairs);
  CHECK(flagged.flagged);
  CHECK(flagged.max_slack > 1e-9);
}

TEST_CASE("property: built-in maps respect their modulus") {
  const DomainComplex k = unit_square();
  const auto pairs = random_pairs(k, 300, 41);
  const std::vector<SetValuedMap> maps = {
      translating_disk(),
      SetValuedMap::scaling(Shape::convex_polytope({make_point({0, 0}), make_point({1, 0}), make_point({0.5, 1})}), 1.0,
                            make_point({0.5, 0.5}), mat(2, 2, {0.3, 0, 0, 0.3})),
      SetValuedMap::rotating_star(Shape::regular_star(make_point({0.5, 0}), 5, 1.0, 0.4), make_point({0, 0}), 0.0,
                                  make_point({1, 0.5})),
  };
  for (const auto& phi : maps) {
    CHECK(phi.modulus()(0.0) == 0.0);
    CHECK(phi.modulus()(0.1) <= phi.modulus()(0.2));
    CHECK(check_continuity(phi, pairs).max_slack <= 1e-9);
  }
}

TEST_CASE("property: witness containment on built-in maps") {
  const DomainComplex k = unit_square();
  Rng rng(43);
  const auto phi = SetValuedMap::rotating_star(Shape::regular_star(make_point({0.5, 0}), 5, 1.0, 0.4),
                                               make_point({0, 0}), 0.0, make_point({1, 0.5}));
  const UvWitness w = straight_line_witness(phi);
  int violations = 0;
  for (int i = 0; i < 50; ++i) {
    const Shape s = phi(random_domain_point(k, rng));
    const double eps = rng.uniform(0.01, 0.5), delta = w.delta_of(eps);
    const Contraction h = w.contraction_for(s, delta, eps);
    for (int j = 0; j < 40; ++j) {
      const Point y = h.target() + make_point({rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)});
      if (!in_neighborhood(y, s, delta)) continue;
      if (!in_neighborhood(h(y, rng.uniform()), s, eps)) ++violations;
    }
  }
  CHECK(violations == 0);
}
