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

#include "nearsel/cover_tower.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace nearsel {
namespace {

double domain_diameter(const DomainComplex& k) {
  double d = 0.0;
  const auto& v = k.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) d = std::max(d, (v[i] - v[j]).norm());
  }
  return d;
}

double nearest_vertex_factor(const DomainComplex& k) {
  const double m = k.dimension();
  return m / (m + 1.0);
}

// Every vertex of the depth-d regular refinement, in a deterministic order.
void lattice_vertices(const DomainComplex& k, int depth, std::vector<DyadicKey>& keys,
                      std::vector<Point>& pts) {
  std::vector<SubSimplex> level;
  for (std::size_t f = 0; f < k.facets().size(); ++f) level.push_back(root_subsimplex(k, static_cast<int>(f)));
  for (int j = 0; j < depth; ++j) {
    std::vector<SubSimplex> next;
    for (const auto& s : level) {
      for (auto& c : refine_children(k, s)) next.push_back(std::move(c));
    }
    level = std::move(next);
  }
  std::map<DyadicKey, Point> unique;
  for (const auto& s : level) {
    for (std::size_t i = 0; i < s.keys.size(); ++i) unique.emplace(s.keys[i], s.coords[i]);
  }
  for (auto& [key, p] : unique) {
    keys.push_back(key);
    pts.push_back(p);
  }
}

// Heaviest vertex of the depth-d simplex containing x; ties go to the lower slot.
std::pair<DyadicKey, Point> heaviest_vertex(const DomainComplex& k, const Point& x, int depth) {
  const Located loc = locate_refined(k, x, depth);
  std::size_t best = 0;
  for (std::size_t i = 1; i < loc.weights.size(); ++i) {
    if (loc.weights[i] > loc.weights[best]) best = i;
  }
  return {loc.simplex.keys[best], loc.simplex.coords[best]};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string describe_point(const Point& p) {
  std::ostringstream os;
  os.precision(9);
  os << "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  os << ")";
  return os.str();
}

TowerLevel make_level(int index, double eps, double cap, const SetValuedMap& phi,
                      const UvWitness& w, const DomainComplex& k) {
  const LocalUv uv = local_uv_level(phi, w, eps, k.vertices().front(), k);
  TowerLevel lv;
  lv.index = index;
  lv.eps = eps;
  lv.delta = uv.delta;
  lv.radius = std::min(uv.radius, cap);
  lv.lattice_depth = lattice_depth_for(k, lv.radius);
  lv.lattice_mesh = refined_mesh_bound(k, lv.lattice_depth);
  return lv;
}

void record(SlackStat& s, double slack, const std::string& where) {
  ++s.checks;
  if (slack < s.min_slack) {
    s.min_slack = slack;
    s.worst = where;
  }
}

}  // namespace

EpsFunction EpsFunction::constant(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw Error("epsilon must be positive and finite");
  EpsFunction e;
  e.value_ = value;
  return e;
}

EpsFunction EpsFunction::affine(double value, Point gradient) {
  if (!std::isfinite(value) || !gradient.allFinite()) throw Error("epsilon coefficients must be finite");
  EpsFunction e;
  e.value_ = value;
  e.gradient_ = std::move(gradient);
  return e;
}

double EpsFunction::operator()(const Point& x) const {
  if (gradient_.size() == 0) return value_;
  require_same_dim(x, dim(gradient_));
  return value_ + gradient_.dot(x);
}

double EpsFunction::min_on(const DomainComplex& k) const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : k.vertices()) m = std::min(m, (*this)(v));
  if (!(m > 0.0)) throw Error("epsilon is not positive on the domain");
  return m;
}

std::string EpsFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (gradient_.size() == 0) {
    os << "constant " << value_;
  } else {
    os << "affine " << value_ << " + <" << describe_point(gradient_) << ", x>";
  }
  return os.str();
}

double bound_delta(const EpsFunction& eps, const Point& anchor, double radius) {
  const double lower = eps(anchor) - eps.lipschitz() * radius;
  if (!(lower > 0.0)) throw Error("epsilon bound is not positive on the element");
  return lower / 2.0;
}

BoundCover bound_function_cover(const EpsFunction& eps, const DomainComplex& k) {
  eps.min_on(k);
  const double factor = nearest_vertex_factor(k) + 0.05;
  for (int depth = 0; depth <= kMaxRefineDepth; ++depth) {
    const double radius = factor * refined_mesh_bound(k, depth);
    if (radius < 1e-12) break;
    BoundCover c;
    c.depth = depth;
    c.radius = radius;
    lattice_vertices(k, depth, c.keys, c.anchors);
    bool ok = true;
    for (const auto& a : c.anchors) {
      const double lower = eps(a) - eps.lipschitz() * radius;
      if (!(lower > 0.0)) {
        ok = false;
        break;
      }
      c.delta.push_back(lower / 2.0);
    }
    if (!ok) continue;
    for (std::size_t i = 0; i < c.keys.size(); ++i) c.index.emplace(c.keys[i], static_cast<int>(i));
    return c;
  }
  throw Error("bound cover radius underflow: epsilon varies too fast for its minimum");
}

LocalUv local_uv_level(const SetValuedMap& phi, const UvWitness& w, double eps, const Point& x,
                       const DomainComplex& k) {
  if (!(eps > 0.0)) throw Error("epsilon must be positive");
  require_same_dim(x, k.ambient_dim());
  LocalUv uv;
  uv.delta = w.delta_of(eps / 2.0) / 2.0;
  const double r2 = phi.modulus().radius_below(uv.delta / 4.0);
  uv.radius = std::isinf(r2) ? domain_diameter(k) : r2 / 2.0;
  if (!(uv.radius >= 1e-12)) throw Error("modulus radius underflow below delta/4");
  return uv;
}

int lattice_depth_for(const DomainComplex& k, double radius) {
  const double factor = nearest_vertex_factor(k);
  for (int d = 0; d <= kMaxRefineDepth; ++d) {
    if (factor * refined_mesh_bound(k, d) <= radius / 2.0) return d;
  }
  throw Error("lattice depth budget exceeded for radius " + fmt(radius));
}

TowerLevel first_level(const BoundCover& pre, const SetValuedMap& phi, const UvWitness& w,
                       const DomainComplex& k) {
  const double min_delta = *std::min_element(pre.delta.begin(), pre.delta.end());
  return make_level(0, min_delta / 3.0, pre.radius / 4.0, phi, w, k);
}

TowerLevel refine_level(const TowerLevel& prev, const SetValuedMap& phi, const UvWitness& w,
                        const DomainComplex& k) {
  return make_level(prev.index + 1, prev.delta / 3.0, prev.radius / 4.0, phi, w, k);
}

Tower::Tower(DomainComplex k, SetValuedMap phi, UvWitness w, EpsFunction eps, BoundCover pre,
             std::vector<TowerLevel> levels)
    : k_(std::move(k)),
      phi_(std::move(phi)),
      w_(std::move(w)),
      eps_(std::move(eps)),
      pre_(std::move(pre)),
      levels_(std::move(levels)) {}

TowerElement Tower::element_at(int level, const Point& x) const {
  const auto& lv = this->level(level);
  auto [key, p] = heaviest_vertex(k_, x, lv.lattice_depth);
  return TowerElement{level, std::move(key), std::move(p)};
}

TowerElement Tower::parent(const TowerElement& e) const {
  if (e.level <= 0) throw Error("level-0 elements link into the bound cover");
  TowerElement up = element_at(e.level - 1, e.anchor);
  if (!((up.anchor - e.anchor).norm() + level(e.level).radius < level(e.level - 1).radius)) {
    throw Error("refinement link failed at level " + std::to_string(e.level));
  }
  return up;
}

int Tower::pre_parent(const TowerElement& e) const {
  if (e.level != 0) throw Error("only level-0 elements link into the bound cover");
  auto [key, p] = heaviest_vertex(k_, e.anchor, pre_.depth);
  const int idx = pre_.index.at(key);
  if (!((p - e.anchor).norm() + level(0).radius < pre_.radius)) {
    throw Error("refinement link into the bound cover failed");
  }
  return idx;
}

bool Tower::contains(const TowerElement& e, const Point& x) const {
  return (x - e.anchor).norm() < level(e.level).radius;
}

Inflated Tower::phi_shape(const TowerElement& e) const {
  return Inflated{value(e), level(e.level).delta};
}

Inflated Tower::psi_shape(const TowerElement& e) const {
  return Inflated{value(e), level(e.level).eps};
}

Tower build_tower(const SetValuedMap& phi, const UvWitness& w, const EpsFunction& eps,
                  const DomainComplex& k, int depth) {
  if (k.empty()) throw Error("empty domain");
  if (phi.domain_dim() != k.ambient_dim()) throw DimensionMismatch(k.ambient_dim(), phi.domain_dim());
  if (depth < k.dimension() + 1) {
    throw Error("tower depth must be at least m+1 = " + std::to_string(k.dimension() + 1));
  }
  BoundCover pre = bound_function_cover(eps, k);
  std::vector<TowerLevel> levels;
  levels.push_back(first_level(pre, phi, w, k));
  while (static_cast<int>(levels.size()) < depth) levels.push_back(refine_level(levels.back(), phi, w, k));
  return Tower(k, phi, w, eps, std::move(pre), std::move(levels));
}

std::size_t TowerRegistry::CellHash::operator()(const Cell& c) const {
  std::size_t h = 0;
  for (auto v : c) h = h * 1000003u ^ std::hash<std::int64_t>{}(v);
  return h;
}

TowerRegistry::TowerRegistry(const Tower& tower)
    : tower_(&tower),
      levels_(static_cast<std::size_t>(tower.depth())),
      index_(static_cast<std::size_t>(tower.depth())),
      grid_(static_cast<std::size_t>(tower.depth())) {}

TowerRegistry::Cell TowerRegistry::cell_of(int level, const Point& x) const {
  const double size = 2.0 * tower_->level(level).radius;
  Cell c{0, 0, 0};
  for (Eigen::Index i = 0; i < x.size(); ++i) c[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(x[i] / size));
  return c;
}

void TowerRegistry::add(const TowerElement& e) {
  const TowerElement* cur = &e;
  TowerElement up;
  while (true) {
    const auto n = static_cast<std::size_t>(cur->level);
    if (index_[n].count(cur->key)) return;  // parents already present
    index_[n].emplace(cur->key, levels_[n].size());
    grid_[n][cell_of(cur->level, cur->anchor)].push_back(levels_[n].size());
    levels_[n].push_back(*cur);
    if (cur->level == 0) return;
    up = tower_->parent(*cur);
    cur = &up;
  }
}

std::size_t TowerRegistry::size() const {
  std::size_t s = 0;
  for (const auto& l : levels_) s += l.size();
  return s;
}

std::int64_t TowerRegistry::index_of(const TowerElement& e) const {
  const auto& idx = index_.at(static_cast<std::size_t>(e.level));
  const auto it = idx.find(e.key);
  return it == idx.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::vector<const TowerElement*> TowerRegistry::near(int level, const Point& x, double r) const {
  std::vector<const TowerElement*> out;
  const double rn = tower_->level(level).radius;
  const double size = 2.0 * rn;
  const auto span = static_cast<std::int64_t>(std::ceil((r + rn) / size));
  const Cell c = cell_of(level, x);
  const int d = dim(x);
  const auto n = static_cast<std::size_t>(level);
  std::array<std::int64_t, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int i = 0; i < d; ++i) {
    lo[static_cast<std::size_t>(i)] = -span;
    hi[static_cast<std::size_t>(i)] = span;
  }
  std::vector<std::size_t> hits;
  for (auto a = lo[0]; a <= hi[0]; ++a) {
    for (auto b = lo[1]; b <= hi[1]; ++b) {
      for (auto cc = lo[2]; cc <= hi[2]; ++cc) {
        const Cell q{c[0] + a, c[1] + b, c[2] + cc};
        auto it = grid_[n].find(q);
        if (it == grid_[n].end()) continue;
        for (std::size_t id : it->second) {
          if ((levels_[n][id].anchor - x).norm() < r + rn) hits.push_back(id);
        }
      }
    }
  }
  std::sort(hits.begin(), hits.end());
  for (std::size_t id : hits) out.push_back(&levels_[n][id]);
  return out;
}

double TowerAudit::min_slack() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : stats) m = std::min(m, s.min_slack);
  return m;
}

bool TowerAudit::ok(double tol, std::string* failure) const {
  for (const auto& s : stats) {
    const bool good = s.strict ? s.min_slack > 0.0 : s.min_slack >= -tol;
    if (!good) {
      if (failure) *failure = s.name + " level " + std::to_string(s.level) + " slack " + fmt(s.min_slack) + " at " + s.worst;
      return false;
    }
  }
  return true;
}

TowerAudit audit_tower(const Tower& tower, const TowerRegistry& reg, std::span<const Point> samples) {
  TowerAudit audit;
  const int depth = tower.depth();
  const auto& eps = tower.eps();
  const auto& phi = tower.phi();
  auto stat = [&audit](const std::string& name, int level, bool strict) -> SlackStat& {
    audit.stats.push_back(SlackStat{name, level, std::numeric_limits<double>::infinity(), 0, strict, {}});
    return audit.stats.back();
  };

  // Values at registered anchors, evaluated once.
  std::vector<std::vector<Shape>> values(static_cast<std::size_t>(depth));
  for (int n = 0; n < depth; ++n) {
    for (const auto& e : reg.level(n)) values[static_cast<std::size_t>(n)].push_back(phi(e.anchor));
  }
  auto value_of = [&](const TowerElement* e) -> const Shape& {
    const auto& lv = reg.level(e->level);
    return values[static_cast<std::size_t>(e->level)][static_cast<std::size_t>(e - lv.data())];
  };

  {
    SlackStat& s = stat("bound_cover", -1, false);
    for (const auto& p : samples) {
      auto [key, a] = heaviest_vertex(tower.domain(), p, tower.pre().depth);
      const int i = tower.pre().index.at(key);
      const double dist = (p - a).norm();
      record(s, std::min(tower.pre().radius - dist, eps(p) - tower.pre().delta[static_cast<std::size_t>(i)]),
             describe_point(p));
    }
  }
  for (int n = 0; n < depth; ++n) {
    const auto& lv = tower.level(n);
    SlackStat& mod = stat("modulus", n, true);
    record(mod, lv.delta / 2.0 - phi.modulus()(2.0 * lv.radius), "level");
    SlackStat& wit = stat("witness", n, false);
    record(wit, tower.witness().delta_of(lv.eps) - lv.delta, "level");
    SlackStat& ord = stat("delta_le_eps", n, false);
    record(ord, lv.eps - lv.delta, "level");
  }
  for (int n = 0; n < depth; ++n) {
    const auto& lv = tower.level(n);
    SlackStat& cover = stat("cover", n, true);
    SlackStat& incl = stat("inclusion_i", n, false);
    for (const auto& p : samples) {
      const TowerElement e = tower.element_at(n, p);
      record(cover, lv.radius - (p - e.anchor).norm(), describe_point(p));
      const Shape at_p = phi(p);
      const double ep = eps(p);
      record(incl, ep - lv.eps - directed_hausdorff_within(phi(e.anchor), at_p, ep - lv.eps), describe_point(p));
      for (const TowerElement* u : reg.near(n, p, 0.0)) {
        record(incl, ep - lv.eps - directed_hausdorff_within(value_of(u), at_p, ep - lv.eps),
               describe_point(u->anchor) + " / " + describe_point(p));
      }
    }
  }
  {
    SlackStat& chain = stat("chain", -1, false);
    SlackStat& refines = stat("refines", -1, true);
    for (const auto& e : reg.level(0)) {
      const int i = tower.pre_parent(e);
      record(chain, tower.pre().delta[static_cast<std::size_t>(i)] / 3.0 - tower.level(0).eps, describe_point(e.anchor));
      record(refines, tower.pre().radius - ((tower.pre().anchors[static_cast<std::size_t>(i)] - e.anchor).norm() + tower.level(0).radius),
             describe_point(e.anchor));
    }
  }
  for (int k = 1; k < depth; ++k) {
    SlackStat& chain = stat("chain", k, false);
    SlackStat& refines = stat("refines", k, true);
    for (const auto& e : reg.level(k)) {
      const TowerElement up = tower.parent(e);
      record(chain, tower.level(k - 1).delta / 3.0 - tower.level(k).eps, describe_point(e.anchor));
      record(refines, tower.level(k - 1).radius - ((up.anchor - e.anchor).norm() + tower.level(k).radius),
             describe_point(e.anchor));
    }
  }
  for (int k = 1; k < depth; ++k) {
    for (int n = 0; n < k; ++n) {
      SlackStat& incl = stat("inclusion_ii " + std::to_string(k) + ">" + std::to_string(n), n, false);
      SlackStat& tri = stat("triangle " + std::to_string(k) + ">" + std::to_string(n), n, true);
      const double dn = tower.level(n).delta;
      const double ek = tower.level(k).eps;
      for (const auto& v : reg.level(k)) {
        const Shape& sv = value_of(&v);
        for (const TowerElement* u : reg.near(n, v.anchor, tower.level(k).radius)) {
          const Shape& su = value_of(u);
          const std::string where = describe_point(v.anchor) + " / " + describe_point(u->anchor);
          record(incl, dn - ek - directed_hausdorff_within(sv, su, dn - ek), where);
          record(tri, 2.0 * dn / 3.0 - hausdorff_within(sv, su, 2.0 * dn / 3.0), where);
        }
      }
    }
  }
  return audit;
}

void write_tower_audit_csv(std::ostream& out, const TowerAudit& audit) {
  out << "inequality,level,checks,min_slack,strict,worst\n";
  for (const auto& s : audit.stats) {
    out << s.name << "," << s.level << "," << s.checks << "," << fmt(s.min_slack) << ","
        << (s.strict ? 1 : 0) << ",\"" << s.worst << "\"\n";
  }
}

}  // namespace nearsel
