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

#include "nearsel/nerve.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace nearsel {
namespace {

std::string show(const Simplex& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

}  // namespace

AbstractComplex::AbstractComplex(const std::vector<Simplex>& generators) {
  std::set<int> verts;
  for (Simplex g : generators) {
    if (g.empty()) throw Error("empty generator");
    std::sort(g.begin(), g.end());
    if (std::adjacent_find(g.begin(), g.end()) != g.end()) throw Error("repeated vertex in simplex");
    if (g.front() < 0) throw Error("vertex ids must be nonnegative");
    if (g.size() > 20) throw Error("simplex too large");
    if (simplices_.count(g)) continue;
    const auto n = static_cast<std::uint32_t>(g.size());
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      Simplex s;
      for (std::uint32_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) s.push_back(g[i]);
      }
      simplices_.insert(std::move(s));
    }
    verts.insert(g.begin(), g.end());
  }
  vertices_.assign(verts.begin(), verts.end());
  index_.reserve(simplices_.size());
  index_.insert(simplices_.begin(), simplices_.end());
}

std::size_t SimplexHash::operator()(const Simplex& s) const noexcept {
  std::size_t seed = s.size();
  for (int v : s) seed ^= std::hash<int>{}(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  return seed;
}

int AbstractComplex::dimension() const {
  int d = -1;
  for (const auto& s : simplices_) d = std::max(d, static_cast<int>(s.size()) - 1);
  return d;
}

std::vector<Simplex> AbstractComplex::maximal() const {
  std::map<int, std::vector<int>> adj;
  for (const auto& s : simplices_) {
    if (s.size() == 2) {
      adj[s[0]].push_back(s[1]);
      adj[s[1]].push_back(s[0]);
    }
  }
  std::vector<Simplex> out;
  for (const auto& s : simplices_) {
    bool maximal = true;
    for (int u : adj[s[0]]) {
      if (std::binary_search(s.begin(), s.end(), u)) continue;
      Simplex t = s;
      t.insert(std::upper_bound(t.begin(), t.end(), u), u);
      if (simplices_.count(t)) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(s);
  }
  return out;
}

AbstractComplex nerve_of_sets(const std::vector<std::set<int>>& sets) {
  std::map<int, Simplex> members;  // point -> sets containing it
  std::vector<Simplex> gens;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].empty()) continue;
    for (int p : sets[i]) members[p].push_back(static_cast<int>(i));
  }
  for (auto& [p, s] : members) gens.push_back(s);
  return AbstractComplex(gens);
}

AbstractComplex k_skeleton(const AbstractComplex& c, int k) {
  if (k < 0) throw Error("skeleton index must be nonnegative");
  std::vector<Simplex> gens;
  for (const auto& s : c.simplices()) {
    if (static_cast<int>(s.size()) <= k + 1) gens.push_back(s);
  }
  return AbstractComplex(gens);
}

AbstractComplex cone(const AbstractComplex& c, int v) {
  if (std::binary_search(c.vertices().begin(), c.vertices().end(), v)) {
    throw Error("cone apex already a vertex");
  }
  std::vector<Simplex> gens{{v}};
  for (const auto& s : c.simplices()) {
    Simplex t = s;
    t.insert(std::upper_bound(t.begin(), t.end(), v), v);
    gens.push_back(std::move(t));
  }
  return AbstractComplex(gens);
}

OrientedComplex::OrientedComplex(AbstractComplex c, std::map<int, int> levels)
    : complex_(std::move(c)), levels_(std::move(levels)), level_index_(levels_.begin(), levels_.end()) {
  for (int v : complex_.vertices()) {
    if (!levels_.count(v)) throw Error("vertex " + std::to_string(v) + " has no level");
    adjacent_[v];
  }
  for (const auto& s : complex_.simplices()) {
    if (s.size() != 2) continue;
    if (levels_.at(s[0]) == levels_.at(s[1])) {
      throw Error("adjacent vertices " + std::to_string(s[0]) + " and " + std::to_string(s[1]) +
                  " share level " + std::to_string(levels_.at(s[0])));
    }
    adjacent_[s[0]].push_back(s[1]);
    adjacent_[s[1]].push_back(s[0]);
  }
}

const std::vector<int>& OrientedComplex::neighbours(int v) const { return adjacent_.at(v); }

bool OrientedComplex::less(int u, int v) const {
  if (level(u) >= level(v)) return false;
  const auto& n = neighbours(u);
  return std::find(n.begin(), n.end(), v) != n.end();
}

Simplex OrientedComplex::ordered(const Simplex& s) const {
  std::vector<std::pair<int, int>> keyed;
  keyed.reserve(s.size());
  for (int v : s) keyed.emplace_back(level(v), v);
  std::sort(keyed.begin(), keyed.end());
  Simplex out;
  out.reserve(s.size());
  for (const auto& kv : keyed) out.push_back(kv.second);
  return out;
}

OrientedComplex orient_by_level(AbstractComplex c, std::map<int, int> levels) {
  return OrientedComplex(std::move(c), std::move(levels));
}

SkeletonFiltration::SkeletonFiltration(const OrientedComplex& o) {
  std::set<int> remaining(o.complex().vertices().begin(), o.complex().vertices().end());
  while (!remaining.empty()) {
    std::vector<int> layer;
    for (int v : remaining) {
      bool minimal = true;
      for (int u : o.neighbours(v)) {
        if (remaining.count(u) && o.level(u) < o.level(v)) {
          minimal = false;
          break;
        }
      }
      if (minimal) layer.push_back(v);
    }
    if (layer.empty()) throw Error("orientation has no minimal element");
    for (int v : layer) {
      remaining.erase(v);
      layer_of_[v] = static_cast<int>(layers_.size());
    }
    layers_.push_back(std::move(layer));
  }
}

int SkeletonFiltration::depth_of(const Simplex& s) const {
  int d = std::numeric_limits<int>::max();
  for (int v : s) d = std::min(d, layer_of(v));
  return d;
}

AbstractComplex SkeletonFiltration::subcomplex(const AbstractComplex& c, int k) const {
  std::vector<Simplex> gens;
  for (const auto& s : c.simplices()) {
    if (in_subcomplex(s, k)) gens.push_back(s);
  }
  return AbstractComplex(gens);
}

SkeletonFiltration filtration(const OrientedComplex& o) { return SkeletonFiltration(o); }

FiltrationCheck check_filtration(const OrientedComplex& o, const SkeletonFiltration& f) {
  FiltrationCheck r;
  auto fail = [&r](std::string msg) {
    if (r.failures.size() < 20) r.failures.push_back(std::move(msg));
  };
  for (int v : o.complex().vertices()) {
    ++r.checked;
    if (f.layer_of(v) < 0 || f.layer_of(v) > f.top()) fail("vertex " + std::to_string(v) + " outside the layers");
  }
  for (const auto& s : o.complex().simplices()) {
    ++r.checked;
    const Simplex ord = o.ordered(s);
    for (std::size_t i = 0; i + 1 < ord.size(); ++i) {
      if (!o.less(ord[i], ord[i + 1])) fail("simplex " + show(s) + " is not a chain");
    }
    const int k = f.depth_of(s);
    // Σ_k = (Σ_k)^{top-k}, checked at the deepest k containing σ.
    if (static_cast<int>(s.size()) - 1 > f.top() - k) {
      fail("simplex " + show(s) + " too large for Σ_" + std::to_string(k));
    }
    // σ ∈ Σ_k \ Σ_{k+1}: its minimum is not a vertex of Σ_{k+1}.
    if (f.layer_of(ord.front()) >= k + 1) fail("min of " + show(s) + " lies in Σ_" + std::to_string(k + 1));
    for (int j = 0; j <= k; ++j) {
      if (!f.in_subcomplex(s, j)) fail("Σ_" + std::to_string(j) + " does not contain Σ_" + std::to_string(k));
    }
  }
  return r;
}

Simplex NervePoint::support() const {
  Simplex s;
  for (std::size_t i = 0; i < simplex.size(); ++i) {
    if (weights[i] > 0.0) s.push_back(simplex[i]);
  }
  return s;
}

void validate(const NervePoint& q) {
  if (q.simplex.empty() || q.simplex.size() != q.weights.size()) throw Error("malformed nerve point");
  if (!std::is_sorted(q.simplex.begin(), q.simplex.end())) throw Error("nerve point simplex must be sorted");
  double sum = 0.0;
  for (double w : q.weights) {
    if (!(w >= 0.0)) throw Error("negative nerve point weight");
    sum += w;
  }
  if (!(std::abs(sum - 1.0) <= 1e-12)) throw Error("nerve point weights do not sum to 1");
}

MaterializedNerve nerve(const Materialization& mat, std::size_t locate_every) {
  MaterializedNerve out;
  const RefinementSystem& sys = mat.system();
  for (std::size_t id = 0; id < mat.elements().size(); ++id) {
    out.levels[static_cast<int>(id)] = mat.elements()[id].level;
  }
  std::vector<Simplex> gens;
  std::size_t counter = 0;
  for (const auto& s : mat.simplices()) {
    std::vector<int> perm(s.keys.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      Simplex chain;
      std::vector<int> prefix;
      Point y = Point::Zero(s.coords.front().size());
      std::set<FaceKey> faces;
      for (int p : perm) {
        prefix.push_back(p);
        std::vector<int> local = prefix;
        std::sort(local.begin(), local.end());
        FaceKey face = s.face(local);
        const int id = mat.element_id(face);
        if (id < 0) throw Error("face of a touched simplex is not registered");
        chain.push_back(id);
        y += sys.barycenter(face);
        faces.insert(std::move(face));
      }
      y /= static_cast<double>(perm.size());
      const CanonicalChain local = canonical_in(s, barycentric_weights(s.coords, y));
      bool same = std::set<FaceKey>(local.faces.begin(), local.faces.end()) == faces;
      if (same && locate_every > 0 && counter % locate_every == 0) {
        const CanonicalChain located = sys.chain_at(y);
        same = std::set<FaceKey>(located.faces.begin(), located.faces.end()) == faces;
      }
      ++counter;
      if (same) {
        ++out.confirmed;
      } else {
        ++out.confirmation_failures;
      }
      gens.push_back(std::move(chain));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  out.complex = AbstractComplex(gens);
  return out;
}

NervePoint to_nerve_point(const Materialization& mat, const CanonicalChain& chain) {
  std::vector<std::pair<int, double>> pairs;
  for (std::size_t i = 0; i < chain.faces.size(); ++i) {
    const int id = mat.element_id(chain.faces[i]);
    if (id < 0) throw Error("canonical support is not materialized");
    pairs.emplace_back(id, chain.weights[i]);
  }
  std::sort(pairs.begin(), pairs.end());
  NervePoint q;
  for (const auto& [id, w] : pairs) {
    q.simplex.push_back(id);
    q.weights.push_back(w);
  }
  return q;
}

NervePoint canonical_map(const Materialization& mat, const Point& x) {
  return to_nerve_point(mat, mat.system().chain_at(x));
}

void write_nerve(std::ostream& out, const AbstractComplex& c, const std::map<int, int>& levels) {
  out << "nerve v1\n";
  for (int v : c.vertices()) out << "n " << v << " level=" << levels.at(v) << "\n";
  for (const auto& s : c.maximal()) {
    out << "s";
    for (int v : s) out << " " << v;
    out << "\n";
  }
}

std::pair<AbstractComplex, std::map<int, int>> read_nerve(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "nerve v1") throw Error("nerve file: expected header 'nerve v1'");
  std::map<int, int> levels;
  std::vector<Simplex> gens;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "n") {
      int id;
      std::string lv;
      if (!(ls >> id >> lv) || lv.rfind("level=", 0) != 0) throw Error("nerve file: bad vertex line");
      std::istringstream num(lv.substr(6));
      int level;
      if (!(num >> level) || !num.eof()) throw Error("nerve file: bad level '" + lv + "'");
      if (!levels.emplace(id, level).second) throw Error("nerve file: vertex " + std::to_string(id) + " repeated");
      gens.push_back({id});
    } else if (tag == "s") {
      Simplex s;
      int v;
      while (ls >> v) s.push_back(v);
      if (s.empty() || !ls.eof()) throw Error("nerve file: bad simplex line");
      std::sort(s.begin(), s.end());
      gens.push_back(std::move(s));
    } else {
      throw Error("nerve file: unknown record '" + tag + "'");
    }
  }
  for (const auto& g : gens) {
    for (int v : g) {
      if (!levels.count(v)) throw Error("nerve file: simplex uses undeclared vertex " + std::to_string(v));
    }
  }
  return {AbstractComplex(gens), std::move(levels)};
}

}  // namespace nearsel
