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

#include "nearsel/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <unordered_set>

namespace nearsel {

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw Error("empty range");
  const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return std::min(i, n - 1);
}

std::vector<double> random_simplex_weights(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& wi : w) {
    wi = -std::log(1.0 - rng.uniform()) + 1e-300;
    sum += wi;
  }
  for (auto& wi : w) wi /= sum;
  return w;
}

Point random_domain_point(const DomainComplex& k, Rng& rng) {
  std::vector<double> cumulative;
  std::vector<std::size_t> ids;
  double total = 0.0;
  for (std::size_t f = 0; f < k.facets().size(); ++f) {
    const auto& s = k.facets()[f];
    if (static_cast<int>(s.size()) - 1 != k.dimension()) continue;
    total += k.volume(s);
    cumulative.push_back(total);
    ids.push_back(f);
  }
  const double u = rng.uniform() * total;
  std::size_t pick = 0;
  while (pick + 1 < cumulative.size() && cumulative[pick] <= u) ++pick;
  const auto& s = k.facets()[ids[pick]];
  const auto w = random_simplex_weights(rng, s.size());
  Point p = Point::Zero(k.ambient_dim());
  for (std::size_t i = 0; i < s.size(); ++i) p += w[i] * k.vertices()[static_cast<std::size_t>(s[i])];
  return p;
}

namespace {

// Vertices of the depth-d regular refinement, or nullopt once there are
// more than `limit`.
std::optional<std::vector<Point>> lattice_vertices(const std::vector<SubSimplex>& level,
                                                   std::size_t limit) {
  std::unordered_set<DyadicKey, DyadicKeyHash> seen;
  std::vector<Point> out;
  for (const auto& s : level) {
    for (std::size_t i = 0; i < s.keys.size(); ++i) {
      if (seen.insert(s.keys[i]).second) {
        out.push_back(s.coords[i]);
        if (out.size() > limit) return std::nullopt;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Point> domain_samples(const DomainComplex& k, std::size_t count, std::uint64_t seed) {
  std::vector<Point> out = k.vertices();
  std::vector<SubSimplex> level;
  for (std::size_t f = 0; f < k.facets().size(); ++f) level.push_back(root_subsimplex(k, static_cast<int>(f)));
  for (int depth = 1; depth <= 20; ++depth) {
    std::vector<SubSimplex> next;
    for (const auto& s : level) {
      for (auto& c : refine_children(k, s)) next.push_back(std::move(c));
    }
    auto verts = lattice_vertices(next, count / 2);
    if (!verts) break;
    out = std::move(*verts);
    level = std::move(next);
  }
  if (out.size() > count) out.clear();
  // Lexicographic order keeps neighbouring grid points adjacent in the list.
  std::sort(out.begin(), out.end(), [](const Point& a, const Point& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  Rng rng(seed);
  while (out.size() < count) out.push_back(random_domain_point(k, rng));
  return out;
}

}  // namespace nearsel
