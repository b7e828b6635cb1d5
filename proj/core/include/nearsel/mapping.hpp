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

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nearsel/complex.hpp"
#include "nearsel/shape.hpp"
#include "nearsel/types.hpp"

namespace nearsel {

// Modulus of continuity ω with H(φ(p), φ(q)) <= ω(|p - q|).
class Modulus {
 public:
  static Modulus lipschitz(double constant);
  // `omega` must be nondecreasing with omega(0) = 0; `inverse(b)` must return
  // some r > 0 with omega(r) < b.
  static Modulus custom(std::function<double(double)> omega,
                        std::function<double(double)> inverse);

  double operator()(double t) const;
  // A radius r > 0 with ω(r) < bound, or +inf when ω vanishes.
  double radius_below(double bound) const;
  // Lipschitz constant, or -1 for a custom modulus.
  double lipschitz_constant() const { return lipschitz_; }

 private:
  double lipschitz_ = 0.0;
  std::function<double(double)> omega_;
  std::function<double(double)> inverse_;
};

enum class MapKind { kConstant, kTranslating, kScaling, kRotatingStar, kCustom };

std::string to_string(MapKind kind);

// Set-valued map φ: X ⇒ R^d with compact star-shaped values.
class SetValuedMap {
 public:
  using Evaluator = std::function<Shape(const Point&)>;

  SetValuedMap(MapKind kind, int domain_dim, Evaluator eval, Modulus modulus,
               std::string description = {});

  // φ(x) = S.
  static SetValuedMap constant(int domain_dim, Shape value);
  // φ(x) = S0 + V x, V a d x m matrix.
  static SetValuedMap translating(Shape base, SmallMatrix velocity);
  // φ(x) = s(x)·S0 + V x with s(x) = s0 + <a, x>, scaled about the origin.
  // s must stay positive on the domain; eval throws otherwise.
  static SetValuedMap scaling(Shape base, double s0, Point scale_gradient, SmallMatrix velocity);
  // φ(x) = S0 rotated about `pivot` by θ0 + <κ, x>.
  static SetValuedMap rotating_star(Shape base, Point pivot, double theta0, Point angular_rate);

  MapKind kind() const { return kind_; }
  int domain_dim() const { return domain_dim_; }
  const Modulus& modulus() const { return modulus_; }
  const std::string& description() const { return description_; }

  Shape operator()(const Point& x) const;

 private:
  MapKind kind_;
  int domain_dim_;
  Evaluator eval_;
  Modulus modulus_;
  std::string description_;
};

// φ(x); throws Error when x lies outside the domain.
Shape eval_map(const SetValuedMap& phi, const DomainComplex& k, const Point& x);

// Open neighborhood O_radius(base).
struct Inflated {
  Shape base;
  double radius = 0.0;
};

// Homotopy H: O_δ(S) x [0,1] -> O_ε(S) with H(y,0) = y and H(y,1) = target.
class Contraction {
 public:
  using Apply = std::function<Point(const Point&, double)>;

  Contraction(Inflated source, Point target, Apply apply);

  const Inflated& source() const { return source_; }
  const Point& target() const { return target_; }
  // Endpoints are returned verbatim, so H(y,0) = y and H(y,1) = target hold
  // bitwise.
  Point operator()(const Point& y, double t) const;

 private:
  Inflated source_;
  Point target_;
  Apply apply_;
};

class UvWitness {
 public:
  using DeltaOf = std::function<double(double)>;
  using ContractionFor = std::function<Contraction(const Shape&, double, double)>;

  UvWitness(DeltaOf delta_of, ContractionFor contraction_for, std::string name);

  // δ(ε) in (0, ε].
  double delta_of(double eps) const;
  // Contraction of O_delta(base) inside O_eps(base).
  Contraction contraction_for(const Shape& base, double delta, double eps) const;
  const std::string& name() const { return name_; }

 private:
  DeltaOf delta_of_;
  ContractionFor contraction_for_;
  std::string name_;
};

// δ(ε) = ε/2 and H(y,t) = (1-t)y + t·c with c the star center of the value.
// contraction_for throws Error when the value fails the visibility test.
UvWitness straight_line_witness(const SetValuedMap& phi);

struct ContinuityReport {
  double max_slack = -std::numeric_limits<double>::infinity();  // max H - ω(|p-q|)
  std::size_t worst_pair = 0;
  std::size_t pairs = 0;
  bool flagged = false;  // max_slack > 1e-9
};

ContinuityReport check_continuity(const SetValuedMap& phi,
                                  std::span<const std::pair<Point, Point>> pairs);

}  // namespace nearsel
