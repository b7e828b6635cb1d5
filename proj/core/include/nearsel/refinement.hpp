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
#include <memory>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nearsel/complex.hpp"
#include "nearsel/cover_tower.hpp"
#include "nearsel/sampling.hpp"

namespace nearsel {

// One open star of b(τ) in the barycentric subdivision of the fine mesh K'.
// Its family index is dim τ.
struct StarElement {
  int level = 0;
  FaceKey face;
  Point barycenter;
  TowerElement target;  // r_n(V)
};

// Positive-weight part of the canonical partition of unity at x: the faces
// of one K' simplex forming a chain, listed by increasing dimension.
struct CanonicalChain {
  SubSimplex simplex;            // K' simplex containing x
  std::vector<double> lambda;    // barycentric weights in `simplex`
  std::vector<std::vector<int>> local_faces;  // local vertex sets, sorted
  std::vector<FaceKey> faces;
  std::vector<double> weights;   // positive, sum 1
};

// Weight (j+1)(λ_(j) - λ_(j+1)) on the barycenter of the face spanned by the
// j+1 largest coordinates: the barycentric coordinates of the point in the
// barycentric subdivision of `simplex`.
CanonicalChain canonical_in(SubSimplex simplex, std::vector<double> lambda);

class RefinementSystem {
 public:
  RefinementSystem(std::shared_ptr<const Tower> tower, int fine_depth);

  const Tower& tower() const { return *tower_; }
  std::shared_ptr<const Tower> tower_ptr() const { return tower_; }
  const DomainComplex& domain() const { return tower_->domain(); }
  int fine_depth() const { return fine_depth_; }
  double fine_mesh() const { return fine_mesh_; }
  int families() const { return domain().dimension() + 1; }
  // Open stars lie within this distance of their barycenter.
  double star_radius() const { return star_radius_; }

  CanonicalChain chain_at(const Point& x) const;
  // Star element of `face` with its r_n target. Throws Error if the
  // containment certificate fails.
  StarElement element(const FaceKey& face) const;
  Point barycenter(const FaceKey& face) const;

 private:
  std::shared_ptr<const Tower> tower_;
  int fine_depth_;
  double fine_mesh_;
  double star_radius_;
};

// Picks the smallest fine depth D with m/(m+1)·(mesh_D + mesh(U_n lattice)) < r_n
// for every family n <= m. Throws Error with the required mesh when D would
// exceed `max_depth`.
RefinementSystem disjoint_refinements(std::shared_ptr<const Tower> tower,
                                      int max_depth = kMaxRefineDepth);

// Fine simplices and star elements touched by the evaluation points.
class Materialization {
 public:
  explicit Materialization(const RefinementSystem& sys);

  // Registers the K' simplex and all of its faces; returns the chain.
  const CanonicalChain& touch(const Point& x);
  void add_simplex(const SubSimplex& s);

  const RefinementSystem& system() const { return *sys_; }
  const std::vector<SubSimplex>& simplices() const { return simplices_; }
  const std::vector<StarElement>& elements() const { return elements_; }
  // Index of a registered face, or -1.
  int element_id(const FaceKey& face) const;
  // A touched simplex containing the element's face.
  const SubSimplex& source_simplex(int element) const {
    return simplices_[static_cast<std::size_t>(source_[static_cast<std::size_t>(element)])];
  }
  // Registers every tower element reached through r_n.
  void register_targets(TowerRegistry& reg) const;

 private:
  const RefinementSystem* sys_;
  std::vector<SubSimplex> simplices_;
  std::unordered_set<FaceKey, FaceKeyHash> simplex_keys_;
  std::vector<StarElement> elements_;
  std::vector<int> source_;
  std::unordered_map<FaceKey, int, FaceKeyHash> element_ids_;
  CanonicalChain last_;
};

struct RefinementAudit {
  std::size_t samples = 0;
  std::size_t uncovered = 0;            // samples with no positive weight
  std::size_t disjointness_violations = 0;  // two same-level faces in a support or chain
  std::size_t elements = 0;
  std::size_t containment_checks = 0;
  double min_containment_slack = std::numeric_limits<double>::infinity();
  double min_certificate_slack = std::numeric_limits<double>::infinity();
  bool ok() const {
    return uncovered == 0 && disjointness_violations == 0 && min_containment_slack > 0.0 &&
           min_certificate_slack > 0.0;
  }
};

// Coverage and structural disjointness at the samples, containment of
// every registered element in its r_n target at `per_element` random points
// of the element.
RefinementAudit audit_refinement(const Materialization& mat, std::span<const Point> samples,
                                 std::size_t per_element, std::uint64_t seed);

// Random point of the open star of `face`, drawn inside `simplex`.
Point random_star_point(const SubSimplex& simplex, const FaceKey& face, Rng& rng);

// Explicit family over a materialized fine complex.
struct DisjointFamily {
  int level = 0;
  std::shared_ptr<const DomainComplex> fine;
  std::vector<Simplex> faces;  // n-faces of `fine`
  std::vector<TowerElement> targets;
};

// All families of `sys` over the explicit fine complex; throws when the fine
// complex would exceed `max_simplices`.
std::vector<DisjointFamily> explicit_families(const RefinementSystem& sys,
                                              std::size_t max_simplices = 200000);

// Minimum distance between the closed stars of distinct family members
// (0 if two closures touch, +inf for fewer than two members).
double discreteness_margin(const DisjointFamily& fam);

// CSV: family level, element id, barycenter coords, r_n anchor coords.
void write_families_csv(std::ostream& out, const Materialization& mat);

}  // namespace nearsel
