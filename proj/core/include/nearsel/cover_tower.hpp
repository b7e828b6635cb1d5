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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nearsel/complex.hpp"
#include "nearsel/mapping.hpp"

namespace nearsel {

// Positive tolerance function ε: X -> (0, inf), constant or affine.
class EpsFunction {
 public:
  static EpsFunction constant(double value);
  static EpsFunction affine(double value, Point gradient);

  double operator()(const Point& x) const;
  double lipschitz() const { return gradient_.size() ? gradient_.norm() : 0.0; }
  // Minimum over the domain (attained at a vertex); throws if not positive.
  double min_on(const DomainComplex& k) const;
  std::string describe() const;

 private:
  double value_ = 0.0;
  Point gradient_;
};

// Cover of X by balls at the vertices of a regular refinement, with
// δ(V) <= ε(p) for all p in V.
struct BoundCover {
  int depth = 0;
  double radius = 0.0;
  std::vector<DyadicKey> keys;
  std::vector<Point> anchors;
  std::vector<double> delta;
  std::unordered_map<DyadicKey, int, DyadicKeyHash> index;
};

// ½(ε(a) - Lip(ε)·radius): a lower bound for ε on the ball, halved.
double bound_delta(const EpsFunction& eps, const Point& anchor, double radius);

// Refines until every element gets a positive δ; throws once the radius
// would drop below 1e-12.
BoundCover bound_function_cover(const EpsFunction& eps, const DomainComplex& k);

struct LocalUv {
  double delta = 0.0;
  double radius = 0.0;
};

// δ_x = δ_w(ε/2)/2, so O_{2δ_x} sits inside the witnessed pair for ε/2, and
// the ball radius r satisfies ω(2r) < δ_x/4.
LocalUv local_uv_level(const SetValuedMap& phi, const UvWitness& w, double eps,
                       const Point& x, const DomainComplex& k);

// One cover U_n: balls of radius `radius` at the vertices of the depth
// `lattice_depth` regular refinement of K, with uniform ε_n, δ_n.
struct TowerLevel {
  int index = 0;
  double eps = 0.0;
  double delta = 0.0;
  double radius = 0.0;
  int lattice_depth = 0;
  double lattice_mesh = 0.0;  // mesh bound at lattice_depth
};

// Largest lattice depth the tower and refinement will address.
inline constexpr int kMaxRefineDepth = 40;

// Level built on top of the bound cover (ε_0 = min δ / 3).
TowerLevel first_level(const BoundCover& pre, const SetValuedMap& phi, const UvWitness& w,
                       const DomainComplex& k);
// ε_{n+1} = δ_n / 3, radius capped at a quarter of the previous one.
TowerLevel refine_level(const TowerLevel& prev, const SetValuedMap& phi, const UvWitness& w,
                        const DomainComplex& k);

// Smallest depth whose nearest-vertex distance bound is <= radius / 2.
int lattice_depth_for(const DomainComplex& k, double radius);

struct TowerElement {
  int level = 0;
  DyadicKey key;  // anchor vertex π_n(U)
  Point anchor;
};

class Tower {
 public:
  Tower(DomainComplex k, SetValuedMap phi, UvWitness w, EpsFunction eps, BoundCover pre,
        std::vector<TowerLevel> levels);

  const DomainComplex& domain() const { return k_; }
  const SetValuedMap& phi() const { return phi_; }
  const UvWitness& witness() const { return w_; }
  const EpsFunction& eps() const { return eps_; }
  const BoundCover& pre() const { return pre_; }
  const std::vector<TowerLevel>& levels() const { return levels_; }
  int depth() const { return static_cast<int>(levels_.size()); }
  const TowerLevel& level(int n) const { return levels_.at(static_cast<std::size_t>(n)); }

  // The element of U_n whose anchor is the heaviest vertex of x's lattice simplex.
  TowerElement element_at(int level, const Point& x) const;
  // Refinement link U_{n} -> U_{n-1}; throws Error if the ball is not inside.
  TowerElement parent(const TowerElement& e) const;
  // Link from U_0 into the bound cover.
  int pre_parent(const TowerElement& e) const;
  bool contains(const TowerElement& e, const Point& x) const;

  Shape value(const TowerElement& e) const { return phi_(e.anchor); }
  Inflated phi_shape(const TowerElement& e) const;  // O_{δ_n}(φ(π_n U))
  Inflated psi_shape(const TowerElement& e) const;  // O_{ε_n}(φ(π_n U))

 private:
  DomainComplex k_;
  SetValuedMap phi_;
  UvWitness w_;
  EpsFunction eps_;
  BoundCover pre_;
  std::vector<TowerLevel> levels_;
};

// Requires depth >= m + 1.
Tower build_tower(const SetValuedMap& phi, const UvWitness& w, const EpsFunction& eps,
                  const DomainComplex& k, int depth);

// Elements touched so far, closed under refinement links.
class TowerRegistry {
 public:
  explicit TowerRegistry(const Tower& tower);

  void add(const TowerElement& e);
  const std::vector<TowerElement>& level(int n) const { return levels_.at(static_cast<std::size_t>(n)); }
  std::size_t size() const;
  // Position of e in level(e.level), or -1.
  std::int64_t index_of(const TowerElement& e) const;
  // Registered level-n elements whose ball meets ball(x, r).
  std::vector<const TowerElement*> near(int level, const Point& x, double r) const;

 private:
  using Cell = std::array<std::int64_t, 3>;
  struct CellHash {
    std::size_t operator()(const Cell& c) const;
  };
  Cell cell_of(int level, const Point& x) const;

  const Tower* tower_;
  std::vector<std::vector<TowerElement>> levels_;
  std::vector<std::unordered_map<DyadicKey, std::size_t, DyadicKeyHash>> index_;
  std::vector<std::unordered_map<Cell, std::vector<std::size_t>, CellHash>> grid_;
};

struct SlackStat {
  std::string name;
  int level = 0;  // -1 for the bound cover
  double min_slack = std::numeric_limits<double>::infinity();
  std::size_t checks = 0;
  bool strict = false;  // slack must be > 0 rather than >= -tol
  std::string worst;
};

struct TowerAudit {
  std::vector<SlackStat> stats;
  double min_slack() const;
  // Every stat within tolerance; the first failing one in `failure`.
  bool ok(double tol = 1e-9, std::string* failure = nullptr) const;
};

// Checks the cover, modulus, witness, refinement chain and the two
// inclusions on the registry and the samples. Inclusion slacks use the
// vertex correspondence bound when it suffices, so they are lower bounds.
TowerAudit audit_tower(const Tower& tower, const TowerRegistry& reg, std::span<const Point> samples);

void write_tower_audit_csv(std::ostream& out, const TowerAudit& audit);

}  // namespace nearsel
