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

#include "nearsel/complex.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace nearsel {
namespace {

SmallMatrix edge_matrix(std::span<const Point> simplex) {
  const auto a = simplex[0].size();
  const auto k = static_cast<Eigen::Index>(simplex.size() - 1);
  SmallMatrix m(a, k);
  for (Eigen::Index j = 0; j < k; ++j) m.col(j) = simplex[j + 1] - simplex[0];
  return m;
}

bool affinely_independent(std::span<const Point> simplex) {
  if (simplex.size() == 1) return true;
  if (static_cast<Eigen::Index>(simplex.size() - 1) > simplex[0].size()) return false;
  const SmallMatrix m = edge_matrix(simplex);
  double scale = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) scale = std::max(scale, m.col(j).norm());
  if (scale == 0.0) return false;
  Eigen::FullPivLU<SmallMatrix> lu(m / scale);
  lu.setThreshold(1e-10);
  return lu.rank() == m.cols();
}

// Child vertex tuples over [x0..xm, midpoints in lexicographic pair order].
const std::vector<std::vector<int>>& child_rule(int q) {
  static const std::vector<std::vector<int>> k0{{0}};
  static const std::vector<std::vector<int>> k1{{0, 2}, {2, 1}};
  // m01=3 m02=4 m12=5
  static const std::vector<std::vector<int>> k2{{0, 3, 4}, {3, 1, 5}, {4, 5, 2}, {3, 5, 4}};
  // m01=4 m02=5 m03=6 m12=7 m13=8 m23=9; Bey's ordering.
  static const std::vector<std::vector<int>> k3{
      {0, 4, 5, 6}, {4, 1, 7, 8}, {5, 7, 2, 9}, {6, 8, 9, 3},
      {4, 5, 6, 8}, {4, 5, 7, 8}, {5, 6, 8, 9}, {5, 7, 8, 9}};
  switch (q) {
    case 0: return k0;
    case 1: return k1;
    case 2: return k2;
    case 3: return k3;
    default: throw Error("regular refinement supports simplices of dimension <= 3");
  }
}

template <class T>
void hash_combine(std::size_t& seed, const T& v) {
  seed ^= std::hash<T>{}(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

DomainComplex::DomainComplex(int ambient_dim, std::vector<Point> vertices,
                             std::vector<Simplex> simplices)
    : ambient_dim_(ambient_dim), vertices_(std::move(vertices)) {
  if (ambient_dim < 1 || ambient_dim > 3) throw Error("domain dimension must be 1, 2 or 3");
  for (const auto& v : vertices_) {
    require_same_dim(v, ambient_dim);
    if (!v.allFinite()) throw Error("domain vertex must be finite");
  }
  std::set<Simplex> unique;
  for (auto s : simplices) {
    if (s.empty()) throw Error("empty simplex");
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw Error("repeated vertex in simplex");
    for (int v : s) {
      if (v < 0 || v >= static_cast<int>(vertices_.size())) throw Error("simplex index out of range");
    }
    std::vector<Point> pts;
    for (int v : s) pts.push_back(vertices_[v]);
    if (!affinely_independent(pts)) throw Error("degenerate simplex detected");
    unique.insert(std::move(s));
  }
  for (const auto& s : unique) {
    bool maximal = true;
    for (const auto& t : unique) {
      if (t.size() > s.size() && std::includes(t.begin(), t.end(), s.begin(), s.end())) {
        maximal = false;
        break;
      }
    }
    if (maximal) {
      facets_.push_back(s);
      dimension_ = std::max(dimension_, static_cast<int>(s.size()) - 1);
    }
  }
  std::sort(facets_.begin(), facets_.end(), [](const Simplex& a, const Simplex& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
}

std::vector<Simplex> DomainComplex::simplices() const {
  std::set<Simplex> all;
  for (const auto& f : facets_) {
    const auto n = f.size();
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      Simplex s;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) s.push_back(f[i]);
      }
      all.insert(std::move(s));
    }
  }
  std::vector<Simplex> out(all.begin(), all.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const Simplex& a, const Simplex& b) { return a.size() < b.size(); });
  return out;
}

Point DomainComplex::barycenter(const Simplex& s) const {
  Point c = Point::Zero(ambient_dim_);
  for (int v : s) c += vertices_[v];
  return c / static_cast<double>(s.size());
}

double DomainComplex::diameter(const Simplex& s) const {
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      d = std::max(d, (vertices_[s[i]] - vertices_[s[j]]).norm());
    }
  }
  return d;
}

double DomainComplex::volume(const Simplex& s) const {
  if (s.size() == 1) return 1.0;
  std::vector<Point> pts;
  for (int v : s) pts.push_back(vertices_[v]);
  const SmallMatrix m = edge_matrix(pts);
  const SmallMatrix gram = m.transpose() * m;
  double fact = 1.0;
  for (std::size_t i = 2; i < s.size(); ++i) fact *= static_cast<double>(i);
  return std::sqrt(std::max(0.0, gram.determinant())) / fact;
}

DomainComplex barycentric_subdivide(const DomainComplex& k) {
  if (k.empty()) throw Error("cannot subdivide an empty complex");
  const auto faces = k.simplices();
  std::map<Simplex, int> index;
  std::vector<Point> verts;
  for (const auto& f : faces) {
    index.emplace(f, static_cast<int>(verts.size()));
    verts.push_back(k.barycenter(f));
  }
  std::vector<Simplex> out;
  for (const auto& facet : k.facets()) {
    std::vector<int> perm(facet.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      Simplex chain, prefix;
      for (int p : perm) {
        prefix.push_back(facet[p]);
        Simplex sorted = prefix;
        std::sort(sorted.begin(), sorted.end());
        chain.push_back(index.at(sorted));
      }
      out.push_back(std::move(chain));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return DomainComplex(k.ambient_dim(), std::move(verts), std::move(out));
}

double mesh(const DomainComplex& k) {
  if (k.empty()) throw Error("mesh of an empty complex");
  double m = 0.0;
  for (const auto& f : k.facets()) m = std::max(m, k.diameter(f));
  return m;
}

std::vector<double> barycentric_weights(std::span<const Point> simplex, const Point& x) {
  const std::size_t n = simplex.size();
  std::vector<double> w(n, 0.0);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  const SmallMatrix m = edge_matrix(simplex);
  const Point rhs = x - simplex[0];
  Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1> mu;
  if (m.rows() == m.cols()) {
    mu = m.partialPivLu().solve(rhs);
  } else {
    mu = m.colPivHouseholderQr().solve(rhs);
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    w[i] = mu[static_cast<Eigen::Index>(i - 1)];
    sum += w[i];
  }
  w[0] = 1.0 - sum;
  return w;
}

BaryPoint try_locate(const DomainComplex& k, const Point& x) {
  require_same_dim(x, k.ambient_dim());
  std::vector<Point> pts;
  for (std::size_t id = 0; id < k.facets().size(); ++id) {
    const auto& f = k.facets()[id];
    pts.clear();
    for (int v : f) pts.push_back(k.vertices()[v]);
    auto w = barycentric_weights(pts, x);
    if (*std::min_element(w.begin(), w.end()) < -kLocateSlack) continue;
    if (static_cast<int>(f.size()) - 1 < k.ambient_dim()) {
      Point recon = Point::Zero(k.ambient_dim());
      for (std::size_t i = 0; i < f.size(); ++i) recon += w[i] * pts[i];
      if ((recon - x).norm() > kLocateSlack * std::max(1.0, k.diameter(f))) continue;
    }
    double sum = 0.0;
    for (double& wi : w) {
      wi = std::max(0.0, wi);
      sum += wi;
    }
    for (double& wi : w) wi /= sum;
    return {static_cast<int>(id), std::move(w)};
  }
  return {};
}

BaryPoint locate(const DomainComplex& k, const Point& x) {
  BaryPoint b = try_locate(k, x);
  if (b.simplex < 0) throw Error("point outside domain");
  return b;
}

DomainComplex read_domain(std::istream& in) {
  std::string line;
  int m = -1;
  bool header = false;
  std::vector<Point> verts;
  std::vector<Simplex> simplices;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (!header) {
      std::string version, mfield;
      if (tag != "domain" || !(ls >> version >> mfield) || version != "v1" ||
          mfield.rfind("m=", 0) != 0) {
        throw Error("domain file: expected header 'domain v1 m=<int>'");
      }
      try {
        m = std::stoi(mfield.substr(2));
      } catch (const std::exception&) {
        throw Error("domain file: bad dimension in header");
      }
      header = true;
      continue;
    }
    if (tag == "v") {
      Point p(m);
      for (int i = 0; i < m; ++i) {
        if (!(ls >> p[i])) throw Error("domain file line " + std::to_string(lineno) + ": bad vertex");
      }
      std::string extra;
      if (ls >> extra) throw Error("domain file line " + std::to_string(lineno) + ": extra coordinates");
      verts.push_back(p);
    } else if (tag == "s") {
      Simplex s;
      int idx;
      while (ls >> idx) s.push_back(idx);
      if (!ls.eof()) throw Error("domain file line " + std::to_string(lineno) + ": bad index");
      simplices.push_back(std::move(s));
    } else {
      throw Error("domain file line " + std::to_string(lineno) + ": unknown record '" + tag + "'");
    }
  }
  if (!header) throw Error("domain file: missing header");
  if (simplices.empty()) throw Error("domain file: no simplices");
  return DomainComplex(m, std::move(verts), std::move(simplices));
}

DomainComplex read_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open domain file: " + path);
  return read_domain(in);
}

void write_domain(std::ostream& out, const DomainComplex& k) {
  out << "domain v1 m=" << k.ambient_dim() << "\n";
  out.precision(17);
  for (const auto& v : k.vertices()) {
    out << "v";
    for (Eigen::Index i = 0; i < v.size(); ++i) out << " " << v[i];
    out << "\n";
  }
  for (const auto& s : k.facets()) {
    out << "s";
    for (int i : s) out << " " << i;
    out << "\n";
  }
}

DyadicKey DyadicKey::midpoint(const DyadicKey& a, const DyadicKey& b) {
  const int e = std::max(a.depth, b.depth);
  std::map<int, std::int64_t> acc;
  for (const auto& [v, n] : a.terms) acc[v] += n << (e - a.depth);
  for (const auto& [v, n] : b.terms) acc[v] += n << (e - b.depth);
  DyadicKey out;
  out.depth = e + 1;
  for (const auto& [v, n] : acc) {
    if (n != 0) out.terms.emplace_back(v, n);
  }
  out.normalize();
  return out;
}

void DyadicKey::normalize() {
  while (depth > 0 &&
         std::all_of(terms.begin(), terms.end(), [](const auto& t) { return t.second % 2 == 0; })) {
    for (auto& t : terms) t.second /= 2;
    --depth;
  }
}

Point key_point(const DomainComplex& k, const DyadicKey& key) {
  Point p = Point::Zero(k.ambient_dim());
  const double scale = std::ldexp(1.0, -key.depth);
  for (const auto& [v, n] : key.terms) p += (static_cast<double>(n) * scale) * k.vertices()[v];
  return p;
}

std::size_t DyadicKeyHash::operator()(const DyadicKey& key) const {
  std::size_t seed = std::hash<int>{}(key.depth);
  for (const auto& [v, n] : key.terms) {
    hash_combine(seed, v);
    hash_combine(seed, n);
  }
  return seed;
}

std::size_t FaceKeyHash::operator()(const FaceKey& face) const {
  std::size_t seed = face.size();
  DyadicKeyHash h;
  for (const auto& k : face) hash_combine(seed, h(k));
  return seed;
}

FaceKey SubSimplex::face(std::span<const int> local) const {
  FaceKey f;
  f.reserve(local.size());
  for (int i : local) f.push_back(keys[static_cast<std::size_t>(i)]);
  std::sort(f.begin(), f.end());
  return f;
}

double SubSimplex::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    for (std::size_t j = i + 1; j < coords.size(); ++j) d = std::max(d, (coords[i] - coords[j]).norm());
  }
  return d;
}

SubSimplex root_subsimplex(const DomainComplex& k, int facet) {
  SubSimplex s;
  s.facet = facet;
  s.depth = 0;
  for (int v : k.facets()[static_cast<std::size_t>(facet)]) {
    s.keys.push_back(DyadicKey::vertex(v));
    s.coords.push_back(k.vertices()[v]);
  }
  return s;
}

std::vector<SubSimplex> refine_children(const DomainComplex& k, const SubSimplex& s) {
  const int q = static_cast<int>(s.keys.size()) - 1;
  const auto& rule = child_rule(q);
  std::vector<DyadicKey> ext = s.keys;
  std::vector<Point> ext_pts = s.coords;
  for (int i = 0; i <= q; ++i) {
    for (int j = i + 1; j <= q; ++j) {
      ext.push_back(DyadicKey::midpoint(s.keys[i], s.keys[j]));
      ext_pts.push_back(key_point(k, ext.back()));
    }
  }
  std::vector<SubSimplex> out;
  out.reserve(rule.size());
  for (const auto& tuple : rule) {
    SubSimplex c;
    c.facet = s.facet;
    c.depth = s.depth + 1;
    for (int idx : tuple) {
      c.keys.push_back(ext[static_cast<std::size_t>(idx)]);
      c.coords.push_back(ext_pts[static_cast<std::size_t>(idx)]);
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

// Endpoints (i, j) of the parent vertex or edge midpoint behind each
// extended index; i == j for parent vertices.
std::vector<std::pair<int, int>> extended_endpoints(int q) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i <= q; ++i) out.emplace_back(i, i);
  for (int i = 0; i <= q; ++i) {
    for (int j = i + 1; j <= q; ++j) out.emplace_back(i, j);
  }
  return out;
}

// Maps parent barycentric weights to child weights, one matrix per child.
// The rules are affine in local indices, so these are shape independent.
const std::vector<Eigen::MatrixXd>& child_transforms(int q) {
  static const auto build = [](int qq) {
    const auto ends = extended_endpoints(qq);
    std::vector<Eigen::MatrixXd> out;
    for (const auto& tuple : child_rule(qq)) {
      Eigen::MatrixXd c = Eigen::MatrixXd::Zero(qq + 1, qq + 1);
      for (int col = 0; col <= qq; ++col) {
        const auto [i, j] = ends[static_cast<std::size_t>(tuple[static_cast<std::size_t>(col)])];
        c(i, col) += 0.5;
        c(j, col) += 0.5;
      }
      out.push_back(c.inverse());
    }
    return out;
  };
  static const std::vector<std::vector<Eigen::MatrixXd>> all{build(0), build(1), build(2), build(3)};
  if (q < 0 || q > 3) throw Error("regular refinement supports simplices of dimension <= 3");
  return all[static_cast<std::size_t>(q)];
}

}  // namespace

Located locate_refined(const DomainComplex& k, const Point& x, int depth) {
  const BaryPoint b = locate(k, x);
  Located cur{root_subsimplex(k, b.simplex), b.weights};
  if (depth <= 0) return cur;
  const int q = static_cast<int>(cur.simplex.keys.size()) - 1;
  const auto& rule = child_rule(q);
  const auto& transforms = child_transforms(q);
  const auto ends = extended_endpoints(q);
  Eigen::VectorXd lambda = Eigen::Map<const Eigen::VectorXd>(cur.weights.data(), q + 1);
  std::vector<DyadicKey> keys = cur.simplex.keys;
  std::vector<Point> pts = cur.simplex.coords;
  for (int level = 0; level < depth; ++level) {
    std::size_t best = 0;
    double best_min = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_w;
    for (std::size_t c = 0; c < transforms.size(); ++c) {
      Eigen::VectorXd w = transforms[c] * lambda;
      const double mn = w.minCoeff();
      if (mn > best_min) {
        best_min = mn;
        best = c;
        best_w = std::move(w);
      }
    }
    std::vector<DyadicKey> next_keys;
    std::vector<Point> next_pts;
    for (int idx : rule[best]) {
      const auto [i, j] = ends[static_cast<std::size_t>(idx)];
      if (i == j) {
        next_keys.push_back(keys[static_cast<std::size_t>(i)]);
        next_pts.push_back(pts[static_cast<std::size_t>(i)]);
      } else {
        next_keys.push_back(DyadicKey::midpoint(keys[static_cast<std::size_t>(i)], keys[static_cast<std::size_t>(j)]));
        next_pts.push_back(key_point(k, next_keys.back()));
      }
    }
    keys = std::move(next_keys);
    pts = std::move(next_pts);
    lambda = best_w.cwiseMax(0.0);
    lambda /= lambda.sum();
  }
  cur.simplex.depth += depth;
  cur.simplex.keys = std::move(keys);
  cur.simplex.coords = std::move(pts);
  // Resync with the geometry; the propagated weights only pick the path.
  auto w = barycentric_weights(cur.simplex.coords, x);
  double sum = 0.0;
  for (double& wi : w) {
    wi = std::max(0.0, wi);
    sum += wi;
  }
  for (double& wi : w) wi /= sum;
  cur.weights = std::move(w);
  return cur;
}

double refined_mesh_bound(const DomainComplex& k, int depth) {
  if (depth < 0) throw Error("negative refinement depth");
  const double base = mesh(k);
  if (k.dimension() <= 2) return std::ldexp(base, -depth);
  // Bey's refinement keeps descendants in finitely many similarity classes
  // that all appear within the first levels.
  std::vector<SubSimplex> level;
  for (std::size_t f = 0; f < k.facets().size(); ++f) level.push_back(root_subsimplex(k, static_cast<int>(f)));
  double worst_scaled = base;
  for (int j = 1; j <= std::min(depth, 3); ++j) {
    std::vector<SubSimplex> next;
    for (const auto& s : level) {
      auto ch = refine_children(k, s);
      for (auto& c : ch) next.push_back(std::move(c));
    }
    level = std::move(next);
    double mj = 0.0;
    for (const auto& s : level) mj = std::max(mj, s.diameter());
    if (j == depth) return mj;
    worst_scaled = std::max(worst_scaled, std::ldexp(mj, j));
  }
  return std::ldexp(worst_scaled, -depth);
}

DomainComplex regular_refine(const DomainComplex& k, int depth) {
  std::vector<SubSimplex> level;
  for (std::size_t f = 0; f < k.facets().size(); ++f) level.push_back(root_subsimplex(k, static_cast<int>(f)));
  for (int j = 0; j < depth; ++j) {
    std::vector<SubSimplex> next;
    for (const auto& s : level) {
      auto ch = refine_children(k, s);
      for (auto& c : ch) next.push_back(std::move(c));
    }
    level = std::move(next);
  }
  std::unordered_map<DyadicKey, int, DyadicKeyHash> ids;
  std::vector<Point> verts;
  std::vector<Simplex> simplices;
  for (const auto& s : level) {
    Simplex simplex;
    for (std::size_t i = 0; i < s.keys.size(); ++i) {
      auto [it, inserted] = ids.emplace(s.keys[i], static_cast<int>(verts.size()));
      if (inserted) verts.push_back(s.coords[i]);
      simplex.push_back(it->second);
    }
    simplices.push_back(std::move(simplex));
  }
  return DomainComplex(k.ambient_dim(), std::move(verts), std::move(simplices));
}

}  // namespace nearsel
