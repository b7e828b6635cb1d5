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

#include "nearsel/mapping.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace nearsel {
namespace {

double operator_norm(const SmallMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<SmallMatrix> svd(m);
  return svd.singularValues()(0);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

Modulus Modulus::lipschitz(double constant) {
  if (!(constant >= 0.0) || !std::isfinite(constant)) {
    throw Error("Lipschitz constant must be finite and nonnegative");
  }
  Modulus m;
  m.lipschitz_ = constant;
  return m;
}

Modulus Modulus::custom(std::function<double(double)> omega,
                        std::function<double(double)> inverse) {
  if (!omega || !inverse) throw Error("custom modulus needs omega and its inverse");
  Modulus m;
  m.lipschitz_ = -1.0;
  m.omega_ = std::move(omega);
  m.inverse_ = std::move(inverse);
  return m;
}

double Modulus::operator()(double t) const {
  if (omega_) return omega_(t);
  return lipschitz_ * t;
}

double Modulus::radius_below(double bound) const {
  if (!(bound > 0.0)) throw Error("modulus bound must be positive");
  if (omega_) {
    const double r = inverse_(bound);
    if (!(r > 0.0) || !(omega_(r) < bound)) {
      throw Error("modulus inverse failed below " + fmt(bound));
    }
    return r;
  }
  if (lipschitz_ == 0.0) return std::numeric_limits<double>::infinity();
  return 0.999 * bound / lipschitz_;
}

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::kConstant: return "constant";
    case MapKind::kTranslating: return "translating";
    case MapKind::kScaling: return "scaling";
    case MapKind::kRotatingStar: return "rotating_star";
    case MapKind::kCustom: return "custom";
  }
  return "unknown";
}

SetValuedMap::SetValuedMap(MapKind kind, int domain_dim, Evaluator eval, Modulus modulus,
                           std::string description)
    : kind_(kind),
      domain_dim_(domain_dim),
      eval_(std::move(eval)),
      modulus_(std::move(modulus)),
      description_(std::move(description)) {
  if (domain_dim < 1 || domain_dim > 3) throw Error("map domain dimension must be 1, 2 or 3");
  if (!eval_) throw Error("set-valued map needs an evaluator");
}

SetValuedMap SetValuedMap::constant(int domain_dim, Shape value) {
  std::string desc = "constant " + value.describe();
  return SetValuedMap(
      MapKind::kConstant, domain_dim, [value](const Point&) { return value; },
      Modulus::lipschitz(0.0), std::move(desc));
}

SetValuedMap SetValuedMap::translating(Shape base, SmallMatrix velocity) {
  if (velocity.rows() != base.dim()) throw DimensionMismatch(base.dim(), static_cast<int>(velocity.rows()));
  const int m = static_cast<int>(velocity.cols());
  const double lip = operator_norm(velocity);
  std::string desc = "translating " + base.describe() + " L=" + fmt(lip);
  return SetValuedMap(
      MapKind::kTranslating, m,
      [base = std::move(base), velocity](const Point& x) {
        require_same_dim(x, static_cast<int>(velocity.cols()));
        return base.translated(velocity * x);
      },
      Modulus::lipschitz(lip), std::move(desc));
}

SetValuedMap SetValuedMap::scaling(Shape base, double s0, Point scale_gradient,
                                   SmallMatrix velocity) {
  const int m = dim(scale_gradient);
  if (velocity.size() == 0) velocity = SmallMatrix::Zero(base.dim(), m);
  if (velocity.rows() != base.dim()) throw DimensionMismatch(base.dim(), static_cast<int>(velocity.rows()));
  if (velocity.cols() != m) throw DimensionMismatch(m, static_cast<int>(velocity.cols()));
  const double r0 = base.radius_about(Point::Zero(base.dim()));
  const double lip = scale_gradient.norm() * r0 + operator_norm(velocity);
  std::string desc = "scaling " + base.describe() + " s0=" + fmt(s0) + " L=" + fmt(lip);
  return SetValuedMap(
      MapKind::kScaling, m,
      [base = std::move(base), s0, scale_gradient, velocity](const Point& x) {
        require_same_dim(x, dim(scale_gradient));
        const double s = s0 + scale_gradient.dot(x);
        if (!(s > 0.0)) throw Error("scale factor is not positive at the query point");
        return base.scaled(s).translated(velocity * x);
      },
      Modulus::lipschitz(lip), std::move(desc));
}

SetValuedMap SetValuedMap::rotating_star(Shape base, Point pivot, double theta0,
                                         Point angular_rate) {
  if (base.dim() != 2) throw Error("rotating map needs a planar value");
  require_same_dim(pivot, 2);
  const int m = dim(angular_rate);
  // Every point moves along a circle of radius <= R about the pivot; chord <= arc.
  const double lip = base.radius_about(pivot) * angular_rate.norm();
  std::string desc = "rotating " + base.describe() + " L=" + fmt(lip);
  return SetValuedMap(
      MapKind::kRotatingStar, m,
      [base = std::move(base), pivot, theta0, angular_rate](const Point& x) {
        require_same_dim(x, dim(angular_rate));
        return base.rotated(theta0 + angular_rate.dot(x), pivot);
      },
      Modulus::lipschitz(lip), std::move(desc));
}

Shape SetValuedMap::operator()(const Point& x) const {
  require_same_dim(x, domain_dim_);
  return eval_(x);
}

Shape eval_map(const SetValuedMap& phi, const DomainComplex& k, const Point& x) {
  if (try_locate(k, x).simplex < 0) throw Error("point outside domain");
  return phi(x);
}

Contraction::Contraction(Inflated source, Point target, Apply apply)
    : source_(std::move(source)), target_(std::move(target)), apply_(std::move(apply)) {
  if (!apply_) throw Error("contraction needs an apply function");
}

Point Contraction::operator()(const Point& y, double t) const {
  if (t == 0.0) return y;
  if (t == 1.0) return target_;
  if (!(t > 0.0 && t < 1.0)) throw Error("contraction time outside [0,1]");
  return apply_(y, t);
}

UvWitness::UvWitness(DeltaOf delta_of, ContractionFor contraction_for, std::string name)
    : delta_of_(std::move(delta_of)),
      contraction_for_(std::move(contraction_for)),
      name_(std::move(name)) {}

double UvWitness::delta_of(double eps) const {
  if (!(eps > 0.0)) throw Error("epsilon must be positive");
  const double d = delta_of_(eps);
  if (!(d > 0.0 && d <= eps)) throw Error("witness returned delta outside (0, eps]");
  return d;
}

Contraction UvWitness::contraction_for(const Shape& base, double delta, double eps) const {
  if (!(delta > 0.0) || !(delta <= eps)) throw Error("contraction needs 0 < delta <= eps");
  return contraction_for_(base, delta, eps);
}

UvWitness straight_line_witness(const SetValuedMap& phi) {
  (void)phi;  // every built-in value carries its own star center
  return UvWitness(
      [](double eps) { return eps / 2.0; },
      [](const Shape& base, double delta, double) {
        if (!is_star_shaped(base)) throw Error("value is not star-shaped about its center");
        const Point c = base.star_center();
        return Contraction(Inflated{base, delta}, c,
                           [c](const Point& y, double t) { return Point((1.0 - t) * y + t * c); });
      },
      "straight_line");
}

ContinuityReport check_continuity(const SetValuedMap& phi,
                                  std::span<const std::pair<Point, Point>> pairs) {
  ContinuityReport r;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [p, q] = pairs[i];
    const double slack = hausdorff(phi(p), phi(q)) - phi.modulus()((p - q).norm());
    if (slack > r.max_slack) {
      r.max_slack = slack;
      r.worst_pair = i;
    }
  }
  r.pairs = pairs.size();
  r.flagged = r.max_slack > 1e-9;
  return r;
}

}  // namespace nearsel
