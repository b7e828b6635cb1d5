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
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nearsel/types.hpp"

namespace nearsel {

using Simplex = std::vector<int>;  // sorted vertex indices

// Finite geometric simplicial complex. `facets` are the maximal simplices as
// given (sorted, deduplicated); simplex ids used by locate() index `facets`.
class DomainComplex {
 public:
  DomainComplex() = default;
  DomainComplex(int ambient_dim, std::vector<Point> vertices, std::vector<Simplex> simplices);

  int ambient_dim() const { return ambient_dim_; }
  // Largest simplex dimension.
  int dimension() const { return dimension_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Simplex>& facets() const { return facets_; }
  // Closure under nonempty subsets, ordered by (size, lexicographic).
  std::vector<Simplex> simplices() const;
  bool empty() const { return facets_.empty(); }

  Point barycenter(const Simplex& s) const;
  double diameter(const Simplex& s) const;
  double volume(const Simplex& s) const;

 private:
  int ambient_dim_ = 0;
  int dimension_ = -1;
  std::vector<Point> vertices_;
  std::vector<Simplex> facets_;
};

struct BaryPoint {
  int simplex = -1;              // facet id
  std::vector<double> weights;   // aligned with facets()[simplex]
};

DomainComplex barycentric_subdivide(const DomainComplex& k);
double mesh(const DomainComplex& k);

// Containment slack for domain membership.
inline constexpr double kLocateSlack = 1e-9;

// Lowest facet id containing x (within kLocateSlack); throws Error outside.
BaryPoint locate(const DomainComplex& k, const Point& x);
// Same, but returns simplex = -1 instead of throwing.
BaryPoint try_locate(const DomainComplex& k, const Point& x);

// Barycentric weights of x with respect to an affinely independent vertex
// list (least squares when the simplex is not full dimensional).
std::vector<double> barycentric_weights(std::span<const Point> simplex, const Point& x);

// Versioned text format:
//   domain v1 m=<int>
//   v <coords...>
//   s <vertex indices...>
DomainComplex read_domain(std::istream& in);
DomainComplex read_domain_file(const std::string& path);
void write_domain(std::ostream& out, const DomainComplex& k);

// ---------------------------------------------------------------------------
// Regular (similarity preserving) refinement, kept implicit.
//
// Every vertex produced by repeatedly refining a facet of K is a dyadic convex
// combination of K's vertices. DyadicKey stores it exactly, normalized to the
// smallest denominator, so the same point reached from neighbouring facets
// gets the same key and bitwise the same coordinates.

struct DyadicKey {
  int depth = 0;  // denominator 2^depth
  std::vector<std::pair<int, std::int64_t>> terms;  // (K vertex, numerator)

  static DyadicKey vertex(int v) { return {0, {{v, 1}}}; }
  static DyadicKey midpoint(const DyadicKey& a, const DyadicKey& b);
  void normalize();

  friend bool operator==(const DyadicKey&, const DyadicKey&) = default;
  friend auto operator<=>(const DyadicKey&, const DyadicKey&) = default;
};

Point key_point(const DomainComplex& k, const DyadicKey& key);

struct DyadicKeyHash {
  std::size_t operator()(const DyadicKey& key) const;
};

using FaceKey = std::vector<DyadicKey>;  // sorted

struct FaceKeyHash {
  std::size_t operator()(const FaceKey& face) const;
};

// One simplex of the depth-`depth` refinement of facet `facet`.
struct SubSimplex {
  int facet = -1;
  int depth = 0;
  std::vector<DyadicKey> keys;
  std::vector<Point> coords;

  FaceKey face(std::span<const int> local) const;
  double diameter() const;
};

SubSimplex root_subsimplex(const DomainComplex& k, int facet);
// The 2^m children of one regular refinement step (bisection, red, Bey).
std::vector<SubSimplex> refine_children(const DomainComplex& k, const SubSimplex& s);

struct Located {
  SubSimplex simplex;
  std::vector<double> weights;
};

// Descends from locate(k, x) to the depth-`depth` simplex containing x.
Located locate_refined(const DomainComplex& k, const Point& x, int depth);

// Upper bound on the mesh of the depth-`depth` regular refinement.
double refined_mesh_bound(const DomainComplex& k, int depth);

// Explicit regular refinement; used for small complexes and tests.
DomainComplex regular_refine(const DomainComplex& k, int depth);

}  // namespace nearsel
