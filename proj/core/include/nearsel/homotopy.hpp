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
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>

#include "nearsel/mapping.hpp"
#include "nearsel/nerve.hpp"

namespace nearsel {

// H_v: Φ(v) x [0,1] -> Ψ(v) into p_v; Φ(v) is H_v.source().
struct TableEntry {
  Contraction h;
  Inflated psi;
  // Entries with equal nonnegative tags share Φ and Ψ; used to cache the
  // transport check.
  std::int64_t tag = -1;
};

class ContractionTable {
 public:
  ContractionTable() = default;
  ContractionTable(const ContractionTable& other) : entries_(other.entries_) { reindex(); }
  ContractionTable(ContractionTable&&) noexcept = default;
  ContractionTable& operator=(const ContractionTable& other) {
    entries_ = other.entries_;
    reindex();
    return *this;
  }
  ContractionTable& operator=(ContractionTable&&) noexcept = default;

  void set(int v, TableEntry e) {
    auto it = entries_.insert_or_assign(v, std::move(e)).first;
    index_[v] = &it->second;
  }
  const TableEntry& at(int v) const;
  bool contains(int v) const { return entries_.count(v) > 0; }
  std::size_t size() const { return entries_.size(); }
  const std::map<int, TableEntry>& entries() const { return entries_; }

 private:
  std::map<int, TableEntry> entries_;
  std::unordered_map<int, const TableEntry*> index_;

  void reindex() {
    index_.clear();
    for (const auto& [v, e] : entries_) index_[v] = &e;
  }
};

using NerveEvaluator = std::function<Point(const NervePoint&)>;

// h(tv + (1-t)z) = H(g(z), t) on the cone |Z| * v.
class ConeMap {
 public:
  ConeMap(NerveEvaluator g, Contraction h) : g_(std::move(g)), h_(std::move(h)) {}
  // z empty means the apex itself (requires t = 1).
  Point operator()(const std::optional<NervePoint>& z, double t) const;
  const Point& apex() const { return h_.target(); }

 private:
  NerveEvaluator g_;
  Contraction h_;
};

ConeMap cone_extend(NerveEvaluator g, Contraction h);

// h on |σ| for σ = v_0 < ... < v_q: h(v_q) = p_{v_q} and
// h(t v_i + (1-t) z) = H_{v_i}(h(z), t), peeling the least vertex first.
// Throws if q is not supported on σ.
Point oriented_simplex_map(const Simplex& ordered_sigma, const ContractionTable& table,
                           const NervePoint& q);

enum class Variant { kGlued, kSkeleton };
std::string to_string(Variant v);

class NerveMap {
 public:
  NerveMap(Variant variant, NerveEvaluator eval) : variant_(variant), eval_(std::move(eval)) {}
  Variant variant() const { return variant_; }
  Point operator()(const NervePoint& q) const { return eval_(q); }

 private:
  Variant variant_;
  NerveEvaluator eval_;
};

struct TransportError : Error {
  TransportError(int lower, int upper, double slack);
  int lower;
  int upper;
  double slack;
};

// Minimum over comparable adjacent u < v of
// Φ(u).radius - Ψ(v).radius - directed_hausdorff(Ψ(v).base, Φ(u).base);
// throws TransportError when some pair is below -1e-12.
double check_transport(const OrientedComplex& o, const ContractionTable& table);

// Glues the per-simplex maps; evaluation uses the simplex given in q.
NerveMap glue(std::shared_ptr<const OrientedComplex> o, std::shared_ptr<const ContractionTable> table);

// Builds h down the filtration: h = p_v on the top layer, then cone
// extensions over Ω_v * v for v in V_k.
NerveMap skeleton_extend(std::shared_ptr<const OrientedComplex> o,
                         std::shared_ptr<const SkeletonFiltration> f,
                         std::shared_ptr<const ContractionTable> table);

struct HomotopyAudit {
  std::size_t vertices = 0;
  std::size_t vertex_mismatches = 0;   // h(v) != p_v bitwise
  std::size_t face_checks = 0;
  double max_face_gap = 0.0;           // dual-path discrepancy on shared faces
  std::size_t containment_checks = 0;
  double min_containment_slack = std::numeric_limits<double>::infinity();
  std::string worst;
};

// (a) h(v) = p_v, (b) every face shared by two simplices evaluated through
// both, (c) h(|σ|) ⊂ Ψ(min σ); `points` random points per simplex/face.
HomotopyAudit audit_homotopy(const OrientedComplex& o, const ContractionTable& table,
                             const NerveMap& h, std::size_t points, std::uint64_t seed);

}  // namespace nearsel
