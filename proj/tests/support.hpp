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

// Brute-force oracles shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <vector>

#include "nearsel/cover_tower.hpp"
#include "nearsel/nerve.hpp"
#include "nearsel/sampling.hpp"
#include "nearsel/shape.hpp"

namespace nearsel::testing {

inline double seg_dist(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

// `per_edge` points on every edge of a closed polygon, vertices included.
inline std::vector<Point> polygon_boundary(const std::vector<Point>& poly, int per_edge) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % poly.size()];
    for (int j = 0; j < per_edge; ++j) out.push_back(a + (b - a) * (static_cast<double>(j) / per_edge));
  }
  return out;
}

inline std::vector<Point> circle_boundary(const Point& c, double r, int n) {
  std::vector<Point> out;
  for (int j = 0; j < n; ++j) {
    const double a = 2.0 * std::numbers::pi * j / n;
    out.push_back(c + r * make_point({std::cos(a), std::sin(a)}));
  }
  return out;
}

// Boundary samples of a planar shape, about `n` in total.
inline std::vector<Point> boundary_samples(const Shape& s, int n) {
  if (const auto* b = s.as_ball()) return circle_boundary(b->center, b->radius, n);
  if (const auto* p = s.as_polytope()) {
    return polygon_boundary(p->hull2d, std::max(1, n / static_cast<int>(p->hull2d.size())));
  }
  const auto& v = s.as_star()->vertices;
  return polygon_boundary(v, std::max(1, n / static_cast<int>(v.size())));
}

inline double min_dist(const Point& p, const std::vector<Point>& cloud) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : cloud) best = std::min(best, (p - q).norm());
  return best;
}

// Exhaustive max-min over both directions.
inline double brute_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  double h = 0.0;
  for (const auto& p : a) h = std::max(h, min_dist(p, b));
  for (const auto& q : b) h = std::max(h, min_dist(q, a));
  return h;
}

// Convex polygon: sorted random angles on an ellipse, jittered centre.
inline Shape random_convex_polygon(Rng& rng, int n) {
  std::vector<double> angles;
  for (int i = 0; i < n; ++i) angles.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
  std::sort(angles.begin(), angles.end());
  const Point c = make_point({rng.uniform(-1, 1), rng.uniform(-1, 1)});
  const double rx = rng.uniform(0.5, 2.0), ry = rng.uniform(0.5, 2.0);
  std::vector<Point> v;
  for (double a : angles) v.push_back(c + make_point({rx * std::cos(a), ry * std::sin(a)}));
  return Shape::convex_polytope(std::move(v));
}

inline std::vector<Point> random_cloud(Rng& rng, int n, int d) {
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) {
    Point p(d);
    for (int k = 0; k < d; ++k) p[k] = rng.uniform(-2, 2);
    out.push_back(p);
  }
  return out;
}

// Hand-built tower whose levels are balls of radius `radius` at the
// vertices of K: a coarse cover that fits stars of a shallow subdivision.
inline std::shared_ptr<const Tower> generous_tower(const DomainComplex& k, double radius) {
  const auto phi = SetValuedMap::constant(k.ambient_dim(), Shape::ball(make_point({0, 0}), 1.0));
  const EpsFunction eps = EpsFunction::constant(1.0);
  BoundCover pre = bound_function_cover(eps, k);
  std::vector<TowerLevel> levels;
  for (int n = 0; n <= k.dimension(); ++n) levels.push_back(TowerLevel{n, 1.0, 0.5, radius, 0, mesh(k)});
  return std::make_shared<const Tower>(k, phi, straight_line_witness(phi), eps, std::move(pre), std::move(levels));
}

struct RandomOriented {
  std::vector<Simplex> generators;
  std::map<int, int> levels;
};

// Random chains over `vertices` vertices with levels in [0, max_level]:
// each generator picks vertices of pairwise distinct levels. Generators are
// added while the closure stays within `max_simplices`.
inline RandomOriented random_oriented(Rng& rng, int vertices, int max_level, std::size_t max_simplices) {
  RandomOriented r;
  std::map<int, std::vector<int>> by_level;
  for (int v = 0; v < vertices; ++v) {
    const int l = static_cast<int>(rng.index(static_cast<std::size_t>(max_level + 1)));
    r.levels[v] = l;
    by_level[l].push_back(v);
  }
  for (int attempt = 0; attempt < 4 * vertices; ++attempt) {
    Simplex s;
    for (const auto& [l, vs] : by_level) {
      if (rng.uniform() < 0.5) s.push_back(vs[rng.index(vs.size())]);
    }
    if (s.empty()) s.push_back(static_cast<int>(rng.index(static_cast<std::size_t>(vertices))));
    std::sort(s.begin(), s.end());
    auto gens = r.generators;
    gens.push_back(s);
    if (AbstractComplex(gens).size() > max_simplices) break;
    r.generators = std::move(gens);
  }
  return r;
}

// Layers of iterated minimal elements, recomputed from the edges alone.
inline std::vector<std::set<int>> brute_layers(const AbstractComplex& c, const std::map<int, int>& levels) {
  std::map<int, std::vector<int>> lower;  // v -> every u with u < v
  for (const auto& s : c.simplices()) {
    if (s.size() != 2) continue;
    const int a = s[0], b = s[1];
    if (levels.at(a) < levels.at(b)) lower[b].push_back(a);
    if (levels.at(b) < levels.at(a)) lower[a].push_back(b);
  }
  std::set<int> remaining(c.vertices().begin(), c.vertices().end());
  std::vector<std::set<int>> layers;
  while (!remaining.empty()) {
    std::set<int> layer;
    for (int v : remaining) {
      bool minimal = true;
      for (int u : lower[v]) minimal = minimal && !remaining.count(u);
      if (minimal) layer.insert(v);
    }
    if (layer.empty()) break;  // a cycle; cannot happen for level orders
    for (int v : layer) remaining.erase(v);
    layers.push_back(std::move(layer));
  }
  return layers;
}

// Compares a filtration with the brute-force layers and checks the
// subcomplex identities on every simplex. Returns the number of mismatches.
inline std::size_t filtration_mismatches(const OrientedComplex& o, const SkeletonFiltration& f) {
  const auto layers = brute_layers(o.complex(), o.levels());
  std::size_t bad = 0;
  if (layers.size() != f.layers().size()) return 1;
  std::map<int, int> layer_of;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const std::set<int> got(f.layers()[k].begin(), f.layers()[k].end());
    if (got != layers[k]) ++bad;
    for (int v : layers[k]) layer_of[v] = static_cast<int>(k);
  }
  const int top = static_cast<int>(layers.size()) - 1;
  for (const auto& s : o.complex().simplices()) {
    int depth = top + 1;
    for (int v : s) depth = std::min(depth, layer_of.at(v));
    if (f.depth_of(s) != depth) ++bad;
    // Σ_k has dimension at most top - k.
    if (static_cast<int>(s.size()) - 1 > top - depth) ++bad;
    // σ ∈ Σ_k \ Σ_{k+1}: its least vertex is not a vertex of Σ_{k+1}.
    if (layer_of.at(o.min(s)) != depth) ++bad;
  }
  return bad;
}

}  // namespace nearsel::testing
