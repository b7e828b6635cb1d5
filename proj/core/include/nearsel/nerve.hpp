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
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nearsel/complex.hpp"
#include "nearsel/refinement.hpp"

namespace nearsel {

// Finite abstract simplicial complex on integer vertex ids.
struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept;
};

class AbstractComplex {
 public:
  AbstractComplex() = default;
  // Closure of the generators under nonempty subsets.
  explicit AbstractComplex(const std::vector<Simplex>& generators);

  const std::vector<int>& vertices() const { return vertices_; }
  const std::set<Simplex>& simplices() const { return simplices_; }
  bool contains(const Simplex& s) const { return index_.count(s) > 0; }
  bool empty() const { return simplices_.empty(); }
  std::size_t size() const { return simplices_.size(); }
  // -1 for the empty complex.
  int dimension() const;
  // Simplices that are not a proper face of another simplex.
  std::vector<Simplex> maximal() const;

 private:
  std::set<Simplex> simplices_;
  std::unordered_set<Simplex, SimplexHash> index_;
  std::vector<int> vertices_;
};

// Nerve of finite point sets: σ is a simplex iff its sets share a point.
AbstractComplex nerve_of_sets(const std::vector<std::set<int>>& sets);

AbstractComplex k_skeleton(const AbstractComplex& c, int k);

// Σ*v = Σ ∪ {σ ∪ {v}} ∪ {{v}}; throws if v is already a vertex.
AbstractComplex cone(const AbstractComplex& c, int v);

// Complex with a level per vertex; u < v iff {u, v} is an edge and
// level(u) < level(v).
class OrientedComplex {
 public:
  OrientedComplex(AbstractComplex c, std::map<int, int> levels);

  const AbstractComplex& complex() const { return complex_; }
  int level(int v) const { return level_index_.at(v); }
  const std::map<int, int>& levels() const { return levels_; }
  const std::vector<int>& neighbours(int v) const;
  bool less(int u, int v) const;
  // Vertices of σ in increasing order.
  Simplex ordered(const Simplex& s) const;
  int min(const Simplex& s) const { return ordered(s).front(); }

 private:
  AbstractComplex complex_;
  std::map<int, int> levels_;
  std::unordered_map<int, int> level_index_;
  std::unordered_map<int, std::vector<int>> adjacent_;
};

// Throws Error when two adjacent vertices share a level.
OrientedComplex orient_by_level(AbstractComplex c, std::map<int, int> levels);

// Layers V_0, V_1, ... of iterated minimal elements and the subcomplexes
// Σ_k = {σ : σ ⊂ V_k ∪ ... ∪ V_{top}}.
class SkeletonFiltration {
 public:
  explicit SkeletonFiltration(const OrientedComplex& o);

  const std::vector<std::vector<int>>& layers() const { return layers_; }
  int layer_of(int v) const { return layer_of_.at(v); }
  // Index of the last layer (n+1 for an (n+1)-dimensional nerve).
  int top() const { return static_cast<int>(layers_.size()) - 1; }
  // Largest k with σ in Σ_k.
  int depth_of(const Simplex& s) const;
  bool in_subcomplex(const Simplex& s, int k) const { return depth_of(s) >= k; }
  AbstractComplex subcomplex(const AbstractComplex& c, int k) const;

 private:
  std::vector<std::vector<int>> layers_;
  std::unordered_map<int, int> layer_of_;
};

SkeletonFiltration filtration(const OrientedComplex& o);

struct FiltrationCheck {
  std::size_t checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Every simplex is a chain; Σ_0 = Σ; Σ_k ⊇ Σ_{k+1};
// Σ_k = (Σ_k)^{top-k}; min σ ∉ (Σ_{k+1})^0 for σ ∈ Σ_k \ Σ_{k+1}.
FiltrationCheck check_filtration(const OrientedComplex& o, const SkeletonFiltration& f);

// Point of |Σ|: vertex ids (sorted) with nonnegative weights summing to 1.
struct NervePoint {
  Simplex simplex;
  std::vector<double> weights;
  // Vertices with positive weight.
  Simplex support() const;
};

void validate(const NervePoint& q);

struct MaterializedNerve {
  AbstractComplex complex;
  std::map<int, int> levels;  // element id -> family level
  std::size_t confirmed = 0;  // chains whose sd-barycenter has exactly that support
  std::size_t confirmation_failures = 0;
};

// Nerve of the registered stars: chains of faces of the touched fine
// simplices. Every maximal chain is confirmed structurally inside its
// simplex; every `locate_every`-th one also through a fresh point location.
MaterializedNerve nerve(const Materialization& mat, std::size_t locate_every = 50);

// Canonical map into the materialized nerve; faces must be registered.
NervePoint canonical_map(const Materialization& mat, const Point& x);
NervePoint to_nerve_point(const Materialization& mat, const CanonicalChain& chain);

//   nerve v1
//   n <id> level=<int>
//   s <ids...>          (maximal simplices; closure implied)
void write_nerve(std::ostream& out, const AbstractComplex& c, const std::map<int, int>& levels);
std::pair<AbstractComplex, std::map<int, int>> read_nerve(std::istream& in);

}  // namespace nearsel
