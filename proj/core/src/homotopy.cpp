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

#include "nearsel/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "nearsel/sampling.hpp"

namespace nearsel {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Weight of each vertex of `ordered` in q (0 when absent); throws if q has
// mass outside `ordered`.
std::vector<double> weights_on(const Simplex& ordered, const NervePoint& q) {
  std::vector<double> w(ordered.size(), 0.0);
  for (std::size_t i = 0; i < q.simplex.size(); ++i) {
    const auto it = std::find(ordered.begin(), ordered.end(), q.simplex[i]);
    if (it == ordered.end()) {
      if (q.weights[i] > 0.0) throw Error("nerve point is not supported on the simplex");
      continue;
    }
    w[static_cast<std::size_t>(it - ordered.begin())] = q.weights[i];
  }
  return w;
}

// Unrolled recursion of h(t v_i + (1-t) z) = H_{v_i}(h(z), t), from the top
// vertex down. Zero weights are exact no-ops because H(y, 0) = y; the highest
// positive weight meets t = 1 and resets the value to its p_v.
Point peel(const Simplex& ordered, const std::vector<double>& w, const ContractionTable& table) {
  Point y = table.at(ordered.back()).h.target();
  double suffix = w.back();
  for (std::size_t i = ordered.size() - 1; i-- > 0;) {
    suffix += w[i];
    if (!(suffix > 0.0)) continue;
    const double t = std::min(1.0, w[i] / suffix);
    y = table.at(ordered[i]).h(y, t);
  }
  return y;
}

}  // namespace

const TableEntry& ContractionTable::at(int v) const {
  const auto it = index_.find(v);
  if (it == index_.end()) throw Error("no contraction for nerve vertex " + std::to_string(v));
  return *it->second;
}

Point ConeMap::operator()(const std::optional<NervePoint>& z, double t) const {
  if (!z) {
    if (t != 1.0) throw Error("cone over an empty complex is only the apex");
    return h_.target();
  }
  return h_(g_(*z), t);
}

ConeMap cone_extend(NerveEvaluator g, Contraction h) { return ConeMap(std::move(g), std::move(h)); }

Point oriented_simplex_map(const Simplex& ordered_sigma, const ContractionTable& table,
                           const NervePoint& q) {
  if (ordered_sigma.empty()) throw Error("empty simplex");
  return peel(ordered_sigma, weights_on(ordered_sigma, q), table);
}

std::string to_string(Variant v) { return v == Variant::kGlued ? "uv_infty" : "uv_omega"; }

TransportError::TransportError(int lower_, int upper_, double slack_)
    : Error("transport precondition fails for " + std::to_string(lower_) + " < " +
            std::to_string(upper_) + ": slack " + fmt(slack_)),
      lower(lower_),
      upper(upper_),
      slack(slack_) {}

double check_transport(const OrientedComplex& o, const ContractionTable& table) {
  double worst = std::numeric_limits<double>::infinity();
  std::map<std::pair<std::int64_t, std::int64_t>, double> cache;
  for (const auto& s : o.complex().simplices()) {
    if (s.size() != 2) continue;
    const Simplex ord = o.ordered(s);
    const int u = ord[0], v = ord[1];
    const TableEntry& eu = table.at(u);
    const TableEntry& ev = table.at(v);
    double slack;
    const bool cacheable = eu.tag >= 0 && ev.tag >= 0;
    const auto key = std::make_pair(eu.tag, ev.tag);
    auto it = cacheable ? cache.find(key) : cache.end();
    if (it != cache.end()) {
      slack = it->second;
    } else {
      const Inflated& phi_u = eu.h.source();
      const double budget = phi_u.radius - ev.psi.radius;
      slack = budget - directed_hausdorff_within(ev.psi.base, phi_u.base, budget);
      if (cacheable) cache.emplace(key, slack);
    }
    if (slack < -1e-12) throw TransportError(u, v, slack);
    worst = std::min(worst, slack);
  }
  return worst;
}

NerveMap glue(std::shared_ptr<const OrientedComplex> o, std::shared_ptr<const ContractionTable> table) {
  for (int v : o->complex().vertices()) table->at(v);
  check_transport(*o, *table);
  return NerveMap(Variant::kGlued, [o, table](const NervePoint& q) {
    validate(q);
    if (!o->complex().contains(q.simplex)) throw Error("nerve point outside the complex");
    return oriented_simplex_map(o->ordered(q.simplex), *table, q);
  });
}

NerveMap skeleton_extend(std::shared_ptr<const OrientedComplex> o,
                         std::shared_ptr<const SkeletonFiltration> f,
                         std::shared_ptr<const ContractionTable> table) {
  for (int v : o->complex().vertices()) table->at(v);
  check_transport(*o, *table);
  return NerveMap(Variant::kSkeleton, [o, f, table](const NervePoint& q) {
    validate(q);
    if (!o->complex().contains(q.simplex)) throw Error("nerve point outside the complex");
    // σ ∈ Σ_k \ Σ_{k+1} has exactly one vertex v in V_k and σ \ {v} ∈ Ω_v;
    // listing σ by layer gives the sequence of cones to climb through.
    Simplex by_layer = q.simplex;
    std::sort(by_layer.begin(), by_layer.end(),
              [&f](int a, int b) { return f->layer_of(a) < f->layer_of(b); });
    for (std::size_t i = 0; i + 1 < by_layer.size(); ++i) {
      if (f->layer_of(by_layer[i]) >= f->layer_of(by_layer[i + 1])) {
        throw Error("simplex meets a filtration layer twice");
      }
    }
    const std::vector<double> w = weights_on(by_layer, q);
    // h_{top}(v) = p_v, then h_k(t v + (1-t) z) = H_v(h_{k+1}(z), t).
    Point y = table->at(by_layer.back()).h.target();
    double suffix = w.back();
    for (std::size_t i = by_layer.size() - 1; i-- > 0;) {
      suffix += w[i];
      if (!(suffix > 0.0)) continue;
      const ConeMap ext = cone_extend([&y](const NervePoint&) { return y; }, table->at(by_layer[i]).h);
      y = ext(NervePoint{}, std::min(1.0, w[i] / suffix));
    }
    return y;
  });
}

HomotopyAudit audit_homotopy(const OrientedComplex& o, const ContractionTable& table,
                             const NerveMap& h, std::size_t points, std::uint64_t seed) {
  HomotopyAudit a;
  Rng rng(seed);
  for (int v : o.complex().vertices()) {
    ++a.vertices;
    const Point y = h(NervePoint{{v}, {1.0}});
    const Point& p = table.at(v).h.target();
    if (!(y.size() == p.size() && (y.array() == p.array()).all())) ++a.vertex_mismatches;
  }

  const std::vector<Simplex> maximal = o.complex().maximal();
  std::map<Simplex, std::vector<std::size_t>> cofaces;
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    const Simplex& s = maximal[i];
    const auto n = static_cast<std::uint32_t>(s.size());
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
      Simplex t;
      for (std::uint32_t b = 0; b < n; ++b) {
        if (mask & (1u << b)) t.push_back(s[b]);
      }
      auto& list = cofaces[t];
      if (list.size() < 2) list.push_back(i);
    }
  }
  auto on = [](const Simplex& big, const Simplex& small, const std::vector<double>& w) {
    NervePoint q{big, std::vector<double>(big.size(), 0.0)};
    for (std::size_t i = 0; i < small.size(); ++i) {
      const auto it = std::lower_bound(big.begin(), big.end(), small[i]);
      q.weights[static_cast<std::size_t>(it - big.begin())] = w[i];
    }
    return q;
  };
  for (const auto& [tau, list] : cofaces) {
    for (std::size_t k = 0; k < points; ++k) {
      const auto w = random_simplex_weights(rng, tau.size());
      const Point direct = h(NervePoint{tau, w});
      double gap = 0.0;
      for (std::size_t c : list) gap = std::max(gap, (h(on(maximal[c], tau, w)) - direct).norm());
      if (list.size() == 2) {
        gap = std::max(gap, (h(on(maximal[list[0]], tau, w)) - h(on(maximal[list[1]], tau, w))).norm());
      }
      a.max_face_gap = std::max(a.max_face_gap, gap);
      ++a.face_checks;
    }
  }

  for (const auto& s : o.complex().simplices()) {
    const TableEntry& lowest = table.at(o.min(s));
    for (std::size_t k = 0; k < points; ++k) {
      const auto w = random_simplex_weights(rng, s.size());
      const Point y = h(NervePoint{s, w});
      const double slack = lowest.psi.radius - dist_point_shape(y, lowest.psi.base);
      ++a.containment_checks;
      if (slack < a.min_containment_slack) {
        a.min_containment_slack = slack;
        std::ostringstream os;
        os << "simplex";
        for (int v : s) os << " " << v;
        a.worst = os.str();
      }
    }
  }
  return a;
}

}  // namespace nearsel
