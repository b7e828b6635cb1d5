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

#include "nearsel/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace nearsel {
namespace {

double star_factor(const DomainComplex& k) {
  const double m = k.dimension();
  return m / (m + 1.0);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

FaceKey simplex_key(const SubSimplex& s) {
  FaceKey k = s.keys;
  std::sort(k.begin(), k.end());
  return k;
}

std::vector<int> local_indices(const SubSimplex& s, const FaceKey& face) {
  std::vector<int> local;
  for (const auto& key : face) {
    const auto it = std::find(s.keys.begin(), s.keys.end(), key);
    if (it == s.keys.end()) throw Error("face is not a face of the simplex");
    local.push_back(static_cast<int>(it - s.keys.begin()));
  }
  std::sort(local.begin(), local.end());
  return local;
}

}  // namespace

RefinementSystem::RefinementSystem(std::shared_ptr<const Tower> tower, int fine_depth)
    : tower_(std::move(tower)), fine_depth_(fine_depth) {
  if (!tower_) throw Error("refinement needs a tower");
  if (tower_->depth() < domain().dimension() + 1) throw Error("tower depth must be at least m+1");
  fine_mesh_ = refined_mesh_bound(domain(), fine_depth_);
  star_radius_ = star_factor(domain()) * fine_mesh_;
}

CanonicalChain canonical_in(SubSimplex simplex, std::vector<double> lambda) {
  CanonicalChain c;
  const std::size_t n = lambda.size();
  if (n != simplex.keys.size()) throw Error("weights do not match the simplex");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return lambda[static_cast<std::size_t>(a)] > lambda[static_cast<std::size_t>(b)];
  });
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double next = j + 1 < n ? lambda[static_cast<std::size_t>(order[j + 1])] : 0.0;
    const double w = static_cast<double>(j + 1) * (lambda[static_cast<std::size_t>(order[j])] - next);
    if (!(w > 0.0)) continue;
    std::vector<int> local(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(j + 1));
    std::sort(local.begin(), local.end());
    c.faces.push_back(simplex.face(local));
    c.local_faces.push_back(std::move(local));
    c.weights.push_back(w);
    total += w;
  }
  for (double& w : c.weights) w /= total;
  c.simplex = std::move(simplex);
  c.lambda = std::move(lambda);
  return c;
}

CanonicalChain RefinementSystem::chain_at(const Point& x) const {
  Located loc = locate_refined(domain(), x, fine_depth_);
  return canonical_in(std::move(loc.simplex), std::move(loc.weights));
}

Point RefinementSystem::barycenter(const FaceKey& face) const {
  Point b = Point::Zero(domain().ambient_dim());
  for (const auto& key : face) b += key_point(domain(), key);
  return b / static_cast<double>(face.size());
}

StarElement RefinementSystem::element(const FaceKey& face) const {
  StarElement e;
  e.level = static_cast<int>(face.size()) - 1;
  e.face = face;
  e.barycenter = barycenter(face);
  e.target = tower_->element_at(e.level, e.barycenter);
  const double reach = (e.barycenter - e.target.anchor).norm() + star_radius_;
  if (!(reach < tower_->level(e.level).radius)) {
    throw Error("star at level " + std::to_string(e.level) + " is not inside its cover element: reach " +
                fmt(reach) + " >= radius " + fmt(tower_->level(e.level).radius));
  }
  return e;
}

RefinementSystem disjoint_refinements(std::shared_ptr<const Tower> tower, int max_depth) {
  if (!tower) throw Error("refinement needs a tower");
  const DomainComplex& k = tower->domain();
  const int m = k.dimension();
  if (tower->depth() < m + 1) throw Error("tower depth must be at least m+1");
  const double f = star_factor(k);
  for (int d = 0; d <= max_depth; ++d) {
    const double mesh_d = refined_mesh_bound(k, d);
    bool ok = true;
    for (int n = 0; n <= m && ok; ++n) {
      const auto& lv = tower->level(n);
      ok = f * (mesh_d + lv.lattice_mesh) < lv.radius;
    }
    if (ok) return RefinementSystem(std::move(tower), d);
  }
  double required = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= m; ++n) {
    const auto& lv = tower->level(n);
    required = std::min(required, lv.radius / f - lv.lattice_mesh);
  }
  throw Error("subdivision budget exceeded: depth " + std::to_string(max_depth) +
              " cannot reach required mesh " + fmt(required));
}

Materialization::Materialization(const RefinementSystem& sys) : sys_(&sys) {}

void Materialization::add_simplex(const SubSimplex& s) {
  FaceKey key = simplex_key(s);
  if (!simplex_keys_.insert(std::move(key)).second) return;
  const int sid = static_cast<int>(simplices_.size());
  simplices_.push_back(s);
  const auto n = static_cast<std::uint32_t>(s.keys.size());
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> local;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) local.push_back(static_cast<int>(i));
    }
    FaceKey face = s.face(local);
    if (element_ids_.count(face)) continue;
    element_ids_.emplace(face, static_cast<int>(elements_.size()));
    elements_.push_back(sys_->element(face));
    source_.push_back(sid);
  }
}

const CanonicalChain& Materialization::touch(const Point& x) {
  last_ = sys_->chain_at(x);
  add_simplex(last_.simplex);
  return last_;
}

int Materialization::element_id(const FaceKey& face) const {
  const auto it = element_ids_.find(face);
  return it == element_ids_.end() ? -1 : it->second;
}

void Materialization::register_targets(TowerRegistry& reg) const {
  for (const auto& e : elements_) reg.add(e.target);
}

Point random_star_point(const SubSimplex& simplex, const FaceKey& face, Rng& rng) {
  const std::vector<int> in_face = local_indices(simplex, face);
  std::vector<int> rest;
  for (int i = 0; i < static_cast<int>(simplex.keys.size()); ++i) {
    if (!std::binary_search(in_face.begin(), in_face.end(), i)) rest.push_back(i);
  }
  auto w = random_simplex_weights(rng, simplex.keys.size());
  std::sort(w.begin(), w.end(), std::greater<>());
  std::vector<int> slots = in_face;
  for (std::size_t i = slots.size(); i > 1; --i) std::swap(slots[i - 1], slots[rng.index(i)]);
  for (std::size_t i = rest.size(); i > 1; --i) std::swap(rest[i - 1], rest[rng.index(i)]);
  slots.insert(slots.end(), rest.begin(), rest.end());
  Point y = Point::Zero(simplex.coords.front().size());
  for (std::size_t i = 0; i < slots.size(); ++i) y += w[i] * simplex.coords[static_cast<std::size_t>(slots[i])];
  return y;
}

RefinementAudit audit_refinement(const Materialization& mat, std::span<const Point> samples,
                                 std::size_t per_element, std::uint64_t seed) {
  const RefinementSystem& sys = mat.system();
  RefinementAudit a;
  a.samples = samples.size();
  for (const auto& x : samples) {
    const CanonicalChain c = sys.chain_at(x);
    double sum = 0.0;
    for (double w : c.weights) sum += w;
    if (c.weights.empty() || !(std::abs(sum - 1.0) < 1e-12)) ++a.uncovered;
    std::set<std::size_t> levels;
    for (const auto& f : c.faces) {
      if (!levels.insert(f.size()).second) ++a.disjointness_violations;
    }
  }
  Rng rng(seed);
  a.elements = mat.elements().size();
  for (std::size_t id = 0; id < mat.elements().size(); ++id) {
    const StarElement& e = mat.elements()[id];
    const double r = sys.tower().level(e.level).radius;
    a.min_certificate_slack = std::min(
        a.min_certificate_slack, r - ((e.barycenter - e.target.anchor).norm() + sys.star_radius()));
    const SubSimplex& s = mat.source_simplex(static_cast<int>(id));
    const std::vector<int> in_face = local_indices(s, e.face);
    for (std::size_t t = 0; t < per_element; ++t) {
      const Point y = random_star_point(s, e.face, rng);
      // The point's support inside s must hold exactly one face of this
      // level, namely e.face.
      const auto lam = barycentric_weights(s.coords, y);
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (std::size_t i = 0; i < lam.size(); ++i) {
        if (std::binary_search(in_face.begin(), in_face.end(), static_cast<int>(i))) {
          lo = std::min(lo, lam[i]);
        } else {
          hi = std::max(hi, lam[i]);
        }
      }
      if (!(lo > hi)) continue;  // drawn on a boundary of the star; resample next round
      a.min_containment_slack = std::min(a.min_containment_slack, r - (y - e.target.anchor).norm());
      ++a.containment_checks;
    }
  }
  return a;
}

std::vector<DisjointFamily> explicit_families(const RefinementSystem& sys, std::size_t max_simplices) {
  const DomainComplex& k = sys.domain();
  double count = 0.0;
  for (const auto& f : k.facets()) {
    count += std::ldexp(1.0, (static_cast<int>(f.size()) - 1) * sys.fine_depth());
  }
  if (count > static_cast<double>(max_simplices)) {
    throw Error("explicit fine complex too large: " + fmt(count) + " simplices");
  }
  auto fine = std::make_shared<const DomainComplex>(regular_refine(k, sys.fine_depth()));
  std::vector<DisjointFamily> fams(static_cast<std::size_t>(sys.families()));
  for (int n = 0; n < sys.families(); ++n) {
    fams[static_cast<std::size_t>(n)].level = n;
    fams[static_cast<std::size_t>(n)].fine = fine;
  }
  for (const auto& s : fine->simplices()) {
    const auto n = static_cast<int>(s.size()) - 1;
    if (n >= sys.families()) continue;
    auto& fam = fams[static_cast<std::size_t>(n)];
    const Point b = fine->barycenter(s);
    const TowerElement t = sys.tower().element_at(n, b);
    if (!((b - t.anchor).norm() + sys.star_radius() < sys.tower().level(n).radius)) {
      throw Error("star is not inside its cover element");
    }
    fam.faces.push_back(s);
    fam.targets.push_back(t);
  }
  return fams;
}

double discreteness_margin(const DisjointFamily& fam) {
  if (fam.faces.size() < 2) return std::numeric_limits<double>::infinity();
  const DomainComplex& fine = *fam.fine;
  const auto& facets = fine.facets();
  // Closed star of b(τ) inside facet F: hull of barycenters of faces of F
  // comparable with τ.
  std::vector<std::vector<std::vector<Point>>> pieces(fam.faces.size());
  for (std::size_t i = 0; i < fam.faces.size(); ++i) {
    const Simplex& tau = fam.faces[i];
    for (const auto& f : facets) {
      if (!std::includes(f.begin(), f.end(), tau.begin(), tau.end())) continue;
      std::vector<Point> verts;
      const auto n = static_cast<std::uint32_t>(f.size());
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        Simplex rho;
        for (std::uint32_t b = 0; b < n; ++b) {
          if (mask & (1u << b)) rho.push_back(f[b]);
        }
        const bool below = std::includes(tau.begin(), tau.end(), rho.begin(), rho.end());
        const bool above = std::includes(rho.begin(), rho.end(), tau.begin(), tau.end());
        if (below || above) verts.push_back(fine.barycenter(rho));
      }
      pieces[i].push_back(std::move(verts));
    }
  }
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fam.faces.size(); ++i) {
    for (std::size_t j = i + 1; j < fam.faces.size(); ++j) {
      const Simplex& a = fam.faces[i];
      const Simplex& b = fam.faces[j];
      std::vector<int> uni;
      std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
      const bool share = uni.size() < a.size() + b.size();
      const bool cofaced = std::any_of(facets.begin(), facets.end(), [&](const Simplex& f) {
        return std::includes(f.begin(), f.end(), uni.begin(), uni.end());
      });
      if (share || cofaced) return 0.0;
      for (const auto& pa : pieces[i]) {
        for (const auto& pb : pieces[j]) {
          std::vector<Point> diff;
          for (const auto& p : pa) {
            for (const auto& q : pb) diff.push_back(p - q);
          }
          margin = std::min(margin, min_norm_point(diff).norm());
        }
      }
    }
  }
  return margin;
}

void write_families_csv(std::ostream& out, const Materialization& mat) {
  const int m = mat.system().domain().ambient_dim();
  out << "level,element";
  for (int i = 0; i < m; ++i) out << ",b" << i;
  for (int i = 0; i < m; ++i) out << ",target" << i;
  out << "\n";
  out.precision(17);
  for (std::size_t id = 0; id < mat.elements().size(); ++id) {
    const auto& e = mat.elements()[id];
    out << e.level << "," << id;
    for (int i = 0; i < m; ++i) out << "," << e.barycenter[i];
    for (int i = 0; i < m; ++i) out << "," << e.target.anchor[i];
    out << "\n";
  }
}

}  // namespace nearsel
