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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "nearsel/refinement.hpp"
#include "nearsel/sampling.hpp"
#include "support.hpp"

using namespace nearsel;
using nearsel::testing::generous_tower;

namespace {

DomainComplex unit_segment() { return DomainComplex(1, {make_point({0}), make_point({1})}, {{0, 1}}); }
DomainComplex unit_triangle() {
  return DomainComplex(2, {make_point({0, 0}), make_point({1, 0}), make_point({0, 1})}, {{0, 1, 2}});
}

std::shared_ptr<const Tower> moving_tower(const DomainComplex& k) {
  SmallMatrix v = SmallMatrix::Zero(2, k.ambient_dim());
  v(0, 0) = 1.0;
  const auto phi = SetValuedMap::translating(Shape::regular_star(make_point({0, 0}), 5, 1.0, 0.4), v);
  return std::make_shared<const Tower>(
      build_tower(phi, straight_line_witness(phi), EpsFunction::constant(0.3), k, k.dimension() + 1));
}

// x lies in the open star of b(τ) iff every coordinate on τ beats every
// coordinate off τ.
bool in_open_star(const std::vector<double>& lambda, const std::vector<int>& tau) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (std::binary_search(tau.begin(), tau.end(), static_cast<int>(i))) {
      lo = std::min(lo, lambda[i]);
    } else {
      hi = std::max(hi, lambda[i]);
    }
  }
  return lo > hi;
}

}  // namespace

TEST_CASE("canonical weights") {
  const DomainComplex k = unit_triangle();
  const SubSimplex s = root_subsimplex(k, 0);
  const CanonicalChain c = canonical_in(s, {0.5, 0.3, 0.2});
  REQUIRE(c.local_faces.size() == 3);
  CHECK(c.local_faces[0] == std::vector<int>{0});
  CHECK(c.local_faces[1] == std::vector<int>{0, 1});
  CHECK(c.local_faces[2] == std::vector<int>{0, 1, 2});
  CHECK(c.weights[0] == doctest::Approx(0.2));
  CHECK(c.weights[1] == doctest::Approx(0.2));
  CHECK(c.weights[2] == doctest::Approx(0.6));

  // A vertex sits on its own star only.
  const CanonicalChain v = canonical_in(s, {0, 1, 0});
  CHECK(v.local_faces == std::vector<std::vector<int>>{{1}});
  CHECK(v.weights == std::vector<double>{1.0});
  // A face barycenter sits on that face's star only.
  const CanonicalChain e = canonical_in(s, {0.5, 0, 0.5});
  CHECK(e.local_faces == std::vector<std::vector<int>>{{0, 2}});
  // Midway between b({0}) and b({0,1}): weight 1/2 on each.
  const CanonicalChain mid = canonical_in(s, {0.75, 0.25, 0});
  CHECK(mid.weights == std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(canonical_in(s, {0.5, 0.5}), Error);
}

TEST_CASE("segment families after one subdivision") {
  const DomainComplex k = unit_segment();
  const RefinementSystem sys(generous_tower(k, 0.8), 1);
  const auto fams = explicit_families(sys);
  REQUIRE(fams.size() == 2);
  std::set<double> v0, v1;
  for (const auto& f : fams[0].faces) v0.insert(fams[0].fine->barycenter(f)[0]);
  for (const auto& f : fams[1].faces) v1.insert(fams[1].fine->barycenter(f)[0]);
  CHECK(v0 == std::set<double>{0.0, 0.5, 1.0});
  CHECK(v1 == std::set<double>{0.25, 0.75});
  // Closed stars of the two edge midpoints meet at 0.5.
  CHECK(discreteness_margin(fams[1]) == 0.0);

  DisjointFamily single = fams[1];
  single.faces.resize(1);
  CHECK(std::isinf(discreteness_margin(single)));
}

TEST_CASE("discreteness margin of non-adjacent vertex stars") {
  const DomainComplex k = unit_segment();
  const RefinementSystem sys(generous_tower(k, 0.9), 2);
  auto fams = explicit_families(sys);
  DisjointFamily ends = fams[0];
  ends.faces.clear();
  const auto& verts = ends.fine->vertices();
  for (int i = 0; i < static_cast<int>(verts.size()); ++i) {
    if (verts[static_cast<std::size_t>(i)][0] == 0.0 || verts[static_cast<std::size_t>(i)][0] == 1.0) {
      ends.faces.push_back({i});
    }
  }
  REQUIRE(ends.faces.size() == 2);
  // Closed stars [0, 1/8] and [7/8, 1].
  CHECK(discreteness_margin(ends) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("disjoint_refinements picks a mesh that fits the covers") {
  const DomainComplex k = unit_triangle();
  const auto tower = moving_tower(k);
  const RefinementSystem sys = disjoint_refinements(tower);
  CHECK(sys.families() == 3);
  Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    for (const auto& f : sys.chain_at(random_domain_point(k, rng)).faces) CHECK_NOTHROW(sys.element(f));
  }
  if (sys.fine_depth() > 0) {
    CHECK_THROWS_AS(disjoint_refinements(tower, sys.fine_depth() - 1), Error);
  }
  CHECK_THROWS_WITH_AS(disjoint_refinements(tower, 0), doctest::Contains("required mesh"), Error);
}

TEST_CASE("property: open stars of one level are disjoint and cover") {
  const DomainComplex k = unit_triangle();
  const RefinementSystem sys(generous_tower(k, 2.0), 3);
  Rng rng(101);
  for (int i = 0; i < 2000; ++i) {
    const Point x = random_domain_point(k, rng);
    const CanonicalChain c = sys.chain_at(x);
    // Oracle: every face of the K' simplex, tested directly.
    std::vector<int> per_level(3, 0);
    const int n = static_cast<int>(c.lambda.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> tau;
      for (int b = 0; b < n; ++b) {
        if (mask & (1 << b)) tau.push_back(b);
      }
      const bool inside = in_open_star(c.lambda, tau);
      per_level[tau.size() - 1] += inside ? 1 : 0;
      const bool listed = std::find(c.local_faces.begin(), c.local_faces.end(), tau) != c.local_faces.end();
      if (inside != listed) {
        // Ties put x on a star boundary; the chain may drop the face.
        CHECK(!inside);
      }
    }
    for (int cnt : per_level) CHECK(cnt <= 1);
    double sum = 0.0;
    Point y = Point::Zero(2);
    for (std::size_t j = 0; j < c.faces.size(); ++j) {
      sum += c.weights[j];
      y += c.weights[j] * sys.barycenter(c.faces[j]);
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK((y - x).norm() < 1e-12);
  }
  // Two distinct edge-barycenter stars share none of 10^5 random points.
  const SubSimplex s = sys.chain_at(make_point({0.3, 0.3})).simplex;
  const FaceKey e01 = s.face(std::vector<int>{0, 1});
  const FaceKey e12 = s.face(std::vector<int>{1, 2});
  std::size_t both = 0, first = 0, second = 0;
  for (int i = 0; i < 100000; ++i) {
    const Point x = random_domain_point(k, rng);
    const CanonicalChain c = sys.chain_at(x);
    const bool a = std::find(c.faces.begin(), c.faces.end(), e01) != c.faces.end();
    const bool b = std::find(c.faces.begin(), c.faces.end(), e12) != c.faces.end();
    first += a;
    second += b;
    both += a && b;
  }
  CHECK(first > 0);
  CHECK(second > 0);
  CHECK(both == 0);
}

TEST_CASE("property: stars lie inside their cover element") {
  const DomainComplex k = unit_triangle();
  const auto tower = moving_tower(k);
  const RefinementSystem sys = disjoint_refinements(tower);
  Materialization mat(sys);
  const auto samples = domain_samples(k, 200, 9);
  for (const auto& x : samples) mat.touch(x);
  Rng rng(103);
  std::size_t checked = 0;
  for (std::size_t id = 0; id < mat.elements().size() && id < 60; ++id) {
    const StarElement& e = mat.elements()[id];
    const SubSimplex& s = mat.source_simplex(static_cast<int>(id));
    for (int j = 0; j < 1000; ++j) {
      const Point y = random_star_point(s, e.face, rng);
      CHECK(tower->contains(e.target, y));
      ++checked;
    }
  }
  CHECK(checked > 0);

  const RefinementAudit a = audit_refinement(mat, samples, 32, 5);
  CHECK(a.ok());
  CHECK(a.uncovered == 0);
  CHECK(a.disjointness_violations == 0);
  CHECK(a.elements == mat.elements().size());

  std::ostringstream csv;
  write_families_csv(csv, mat);
  CHECK(csv.str().rfind("level,element,b0,b1,target0,target1\n", 0) == 0);
}

TEST_CASE("materialization registers every face once") {
  const DomainComplex k = unit_triangle();
  const RefinementSystem sys(generous_tower(k, 2.0), 2);
  Materialization mat(sys);
  mat.touch(make_point({0.1, 0.1}));
  const std::size_t n = mat.elements().size();
  CHECK(n == 7);  // one triangle: 3 vertices, 3 edges, 1 face
  mat.touch(make_point({0.1, 0.1}));
  CHECK(mat.elements().size() == n);
  for (std::size_t id = 0; id < n; ++id) CHECK(mat.element_id(mat.elements()[id].face) == static_cast<int>(id));
  CHECK(mat.element_id(FaceKey{DyadicKey::vertex(2)}) == -1);
}
