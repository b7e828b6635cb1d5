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
#include <random>
#include <vector>

#include "nearsel/complex.hpp"

namespace nearsel {

// Seeded generator with a platform independent double conversion.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform index in [0, n).
  std::size_t index(std::size_t n);
  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Uniform barycentric weights on the (n-1)-simplex, all positive.
std::vector<double> random_simplex_weights(Rng& rng, std::size_t n);

// Uniform point of |K| restricted to the top-dimensional facets.
Point random_domain_point(const DomainComplex& k, Rng& rng);

// Deterministic verification set: vertices of the finest regular refinement
// holding at most count/2 of them, topped up with random points.
std::vector<Point> domain_samples(const DomainComplex& k, std::size_t count, std::uint64_t seed);

}  // namespace nearsel
