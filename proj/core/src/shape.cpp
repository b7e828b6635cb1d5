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

#include "nearsel/shape.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

namespace nearsel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cross2(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

// Strict orientation sign with a relative tolerance.
int orient(const Point& a, const Point& b, const Point& c) {
  const double v = cross2(b - a, c - a);
  const double scale = (b - a).norm() * (c - a).norm();
  if (std::abs(v) <= 1e-14 * scale) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
  return orient(a, b, p) == 0 && std::min(a[0], b[0]) <= p[0] &&
         p[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= p[1] &&
         p[1] <= std::max(a[1], b[1]);
}

bool segments_intersect(const Point& a, const Point& b, const Point& c,
                        const Point& d) {
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0) {
    if (o1 != 0 || o2 != 0) return true;
  }
  if (o1 == 0 && on_segment(c, a, b)) return true;
  if (o2 == 0 && on_segment(d, a, b)) return true;
  if (o3 == 0 && on_segment(a, c, d)) return true;
  if (o4 == 0 && on_segment(b, c, d)) return true;
  return false;
}

double segment_segment_distance(const Point& a, const Point& b, const Point& c,
                                const Point& d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

std::vector<Point> hull_2d(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point& a, const Point& b) { return a == b; }),
            pts.end());
  if (pts.size() <= 2) return pts;
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

int affine_rank(const std::vector<Point>& pts) {
  if (pts.size() <= 1) return 0;
  const int d = dim(pts[0]);
  Eigen::MatrixXd m(d, static_cast<Eigen::Index>(pts.size() - 1));
  double scale = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i - 1)) = pts[i] - pts[0];
    scale = std::max(scale, (pts[i] - pts[0]).norm());
  }
  if (scale == 0.0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-12);
  return static_cast<int>(lu.rank());
}

ConvexPolytope build_polytope(std::vector<Point> vertices) {
  ConvexPolytope poly;
  const int d = dim(vertices.front());
  poly.centroid = Point::Zero(d);
  for (const auto& v : vertices) poly.centroid += v;
  poly.centroid /= static_cast<double>(vertices.size());
  if (d == 2) {
    poly.hull2d = hull_2d(vertices);
    const auto& h = poly.hull2d;
    if (h.size() >= 3) {
      for (std::size_t i = 0; i < h.size(); ++i) {
        const Point e = h[(i + 1) % h.size()] - h[i];
        Point n = make_point({e[1], -e[0]});
        n.normalize();
        poly.facet_normals.push_back(n);
        poly.facet_offsets.push_back(n.dot(h[i]));
      }
    }
  } else if (d == 3 && affine_rank(vertices) == 3) {
    const std::size_t n = vertices.size();
    double scale = 0.0;
    for (const auto& v : vertices) scale = std::max(scale, (v - poly.centroid).norm());
    const double tol = 1e-12 * std::max(1.0, scale);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          Eigen::Vector3d a = vertices[i], b = vertices[j], c = vertices[k];
          Eigen::Vector3d nrm = (b - a).cross(c - a);
          if (nrm.norm() <= 1e-14 * std::max(1.0, scale * scale)) continue;
          nrm.normalize();
          bool all_below = true, all_above = true;
          for (const auto& v : vertices) {
            const double s = nrm.dot(Eigen::Vector3d(v) - a);
            if (s > tol) all_below = false;
            if (s < -tol) all_above = false;
          }
          if (!all_below && !all_above) continue;
          if (!all_below) nrm = -nrm;
          const double off = nrm.dot(a);
          bool dup = false;
          for (std::size_t f = 0; f < poly.facet_normals.size(); ++f) {
            if ((Eigen::Vector3d(poly.facet_normals[f]) - nrm).norm() < 1e-9 &&
                std::abs(poly.facet_offsets[f] - off) < 1e-9 * std::max(1.0, scale)) {
              dup = true;
              break;
            }
          }
          if (!dup) {
            poly.facet_normals.push_back(Point(nrm));
            poly.facet_offsets.push_back(off);
          }
        }
      }
    }
  } else if (d != 3) {
    throw Error("convex polytopes are supported in R^2 and R^3 only");
  }
  poly.vertices = std::move(vertices);
  return poly;
}

bool point_in_polygon(const Point& p, const std::vector<Point>& poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    if ((a[1] > p[1]) != (b[1] > p[1])) {
      const double x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
      if (p[0] < x) inside = !inside;
    }
  }
  return inside;
}

double polygon_boundary_distance(const Point& p, const std::vector<Point>& poly) {
  double best = kInf;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  }
  return best;
}

double polytope_distance(const Point& p, const ConvexPolytope& poly) {
  if (dim(p) == 2) {
    const auto& h = poly.hull2d;
    if (h.size() == 1) return (p - h[0]).norm();
    if (h.size() == 2) return point_segment_distance(p, h[0], h[1]);
    bool inside = true;
    for (std::size_t f = 0; f < poly.facet_normals.size(); ++f) {
      if (poly.facet_normals[f].dot(p) > poly.facet_offsets[f]) {
        inside = false;
        break;
      }
    }
    return inside ? 0.0 : polygon_boundary_distance(p, h);
  }
  if (!poly.facet_normals.empty()) {
    bool inside = true;
    for (std::size_t f = 0; f < poly.facet_normals.size(); ++f) {
      if (poly.facet_normals[f].dot(p) > poly.facet_offsets[f]) {
        inside = false;
        break;
      }
    }
    if (inside) return 0.0;
  }
  std::vector<Point> shifted;
  shifted.reserve(poly.vertices.size());
  for (const auto& v : poly.vertices) shifted.push_back(v - p);
  return min_norm_point(shifted).norm();
}

// Feature-crossing enumeration of sup_{y in [a,b]} dist(y, T) for a star
// polygon T. The envelope min over features (vertices, edge lines restricted
// to their slabs) is a minimum of convex pieces, so interior maxima sit where
// two features tie.
double sup_distance_on_segment(const Point& a, const Point& b, const StarPolygon& star,
                               const Shape& target) {
  const auto& v = star.vertices;
  const std::size_t n = v.size();
  const Point d = b - a;

  double upper = kInf;
  for (const auto& w : v) upper = std::min(upper, std::max((a - w).norm(), (b - w).norm()));

  std::vector<std::size_t> vert_feats, edge_feats;
  for (std::size_t i = 0; i < n; ++i) {
    if (point_segment_distance(v[i], a, b) <= upper) vert_feats.push_back(i);
    if (segment_segment_distance(a, b, v[i], v[(i + 1) % n]) <= upper) edge_feats.push_back(i);
  }

  std::vector<double> cand{0.0, 1.0};
  auto push = [&](double s) {
    if (std::isfinite(s) && s > 0.0 && s < 1.0) cand.push_back(s);
  };
  auto solve_quadratic = [&](double qa, double qb, double qc) {
    const double scale = std::max({std::abs(qa), std::abs(qb), std::abs(qc)});
    if (scale == 0.0) return;
    if (std::abs(qa) <= 1e-15 * scale) {
      if (qb != 0.0) push(-qc / qb);
      return;
    }
    const double disc = qb * qb - 4 * qa * qc;
    if (disc < 0.0) {
      push(-qb / (2 * qa));
      return;
    }
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (qb + (qb >= 0 ? sq : -sq));
    if (q != 0.0) push(qc / q);
    push(q / qa);
  };

  std::vector<Point> normals(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point e = v[(i + 1) % n] - v[i];
    normals[i] = make_point({e[1], -e[0]}) / e.norm();
  }
  // vertex-vertex: linear
  for (std::size_t x = 0; x < vert_feats.size(); ++x) {
    for (std::size_t y = x + 1; y < vert_feats.size(); ++y) {
      const Point& p = v[vert_feats[x]];
      const Point& q = v[vert_feats[y]];
      const double den = 2.0 * d.dot(q - p);
      if (den != 0.0) push((q.squaredNorm() - p.squaredNorm() - 2.0 * a.dot(q - p)) / den);
    }
  }
  // vertex-line: quadratic
  for (std::size_t vi : vert_feats) {
    for (std::size_t ei : edge_feats) {
      const Point& nrm = normals[ei];
      const Point& p0 = v[ei];
      const double nd = nrm.dot(d);
      const double na = nrm.dot(a - p0);
      solve_quadratic(d.squaredNorm() - nd * nd, 2.0 * d.dot(a - v[vi]) - 2.0 * na * nd,
                      (a - v[vi]).squaredNorm() - na * na);
    }
  }
  // line-line: linear, both signs
  for (std::size_t x = 0; x < edge_feats.size(); ++x) {
    for (std::size_t y = x + 1; y < edge_feats.size(); ++y) {
      const Point& n1 = normals[edge_feats[x]];
      const Point& n2 = normals[edge_feats[y]];
      const double c1 = n1.dot(a - v[edge_feats[x]]), s1 = n1.dot(d);
      const double c2 = n2.dot(a - v[edge_feats[y]]), s2 = n2.dot(d);
      if (s1 - s2 != 0.0) push((c2 - c1) / (s1 - s2));
      if (s1 + s2 != 0.0) push(-(c1 + c2) / (s1 + s2));
    }
  }
  // distance to each line alone vanishes where the segment crosses it
  double best = 0.0;
  for (double s : cand) best = std::max(best, dist_point_shape(a + s * d, target));
  return best;
}

// Lipschitz branch and bound over the circle boundary of a ball source.
DirectedHausdorff sup_distance_on_circle(const Ball& ball, const Shape& target) {
  const double r = ball.radius;
  auto f = [&](double theta) {
    return dist_point_shape(ball.center + r * make_point({std::cos(theta), std::sin(theta)}),
                            target);
  };
  const double tol = 1e-12 * std::max(1.0, r);
  struct Interval {
    double lo, hi, ub;
    bool operator<(const Interval& o) const { return ub < o.ub; }
  };
  std::priority_queue<Interval> queue;
  double best = 0.0;
  constexpr int kInitial = 256;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < kInitial; ++i) {
    const double lo = two_pi * i / kInitial, hi = two_pi * (i + 1) / kInitial;
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    best = std::max(best, fm);
    queue.push({lo, hi, fm + r * 0.5 * (hi - lo)});
  }
  constexpr int kBudget = 400000;
  int evaluations = kInitial;
  while (!queue.empty()) {
    const Interval top = queue.top();
    if (top.ub <= best + tol) break;
    if (evaluations >= kBudget) {
      return {top.ub, top.ub - best};
    }
    queue.pop();
    const double mid = 0.5 * (top.lo + top.hi);
    for (const auto& [lo, hi] : {std::pair{top.lo, mid}, std::pair{mid, top.hi}}) {
      const double m = 0.5 * (lo + hi);
      const double fm = f(m);
      ++evaluations;
      best = std::max(best, fm);
      queue.push({lo, hi, fm + r * 0.5 * (hi - lo)});
    }
  }
  return {best + tol, tol};
}

bool is_convex_kind(const Shape& s) { return s.kind() != ShapeKind::kStarPolygon; }

}  // namespace

Shape Shape::ball(Point center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("ball radius must be positive");
  if (!center.allFinite()) throw Error("ball center must be finite");
  return Shape(Ball{std::move(center), radius});
}

Shape Shape::convex_polytope(std::vector<Point> vertices) {
  if (vertices.empty()) throw Error("convex polytope needs at least one vertex");
  const int d = nearsel::dim(vertices.front());
  for (const auto& v : vertices) {
    require_same_dim(v, d);
    if (!v.allFinite()) throw Error("polytope vertex must be finite");
  }
  return Shape(build_polytope(std::move(vertices)));
}

Shape Shape::star_polygon(std::vector<Point> vertices, Point center) {
  Shape s = star_polygon_unchecked(std::move(vertices), std::move(center));
  if (!is_star_shaped(s)) throw Error("polygon is not simple and star-shaped about its center");
  return s;
}

Shape Shape::star_polygon_unchecked(std::vector<Point> vertices, Point center) {
  if (vertices.size() < 3) throw Error("star polygon needs at least three vertices");
  require_same_dim(center, 2);
  for (const auto& v : vertices) require_same_dim(v, 2);
  return Shape(StarPolygon{std::move(vertices), std::move(center)});
}

Shape Shape::regular_star(const Point& center, int points, double outer, double inner,
                          double phase) {
  if (points < 2 || !(outer > 0.0) || !(inner > 0.0)) throw Error("bad regular star parameters");
  std::vector<Point> verts;
  for (int k = 0; k < 2 * points; ++k) {
    const double r = (k % 2 == 0) ? outer : inner;
    const double ang = phase + std::numbers::pi * k / points;
    verts.push_back(center + r * make_point({std::cos(ang), std::sin(ang)}));
  }
  return star_polygon(std::move(verts), center);
}

ShapeKind Shape::kind() const {
  return std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) return ShapeKind::kBall;
        else if constexpr (std::is_same_v<T, ConvexPolytope>) return ShapeKind::kConvexPolytope;
        else return ShapeKind::kStarPolygon;
      },
      rep_);
}

int Shape::dim() const { return nearsel::dim(star_center()); }

const Point& Shape::star_center() const {
  return std::visit(
      [](const auto& r) -> const Point& {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) return r.center;
        else if constexpr (std::is_same_v<T, ConvexPolytope>) return r.centroid;
        else return r.center;
      },
      rep_);
}

const std::vector<Point>& Shape::vertices() const {
  static const std::vector<Point> kNone;
  if (const auto* p = as_polytope()) return p->vertices;
  if (const auto* s = as_star()) return s->vertices;
  return kNone;
}

double Shape::radius_about(const Point& c) const {
  if (const auto* b = as_ball()) return (c - b->center).norm() + b->radius;
  double r = 0.0;
  for (const auto& v : vertices()) r = std::max(r, (v - c).norm());
  return r;
}

Shape Shape::translated(const Point& offset) const {
  if (const auto* b = as_ball()) return Shape(Ball{b->center + offset, b->radius});
  if (const auto* s = as_star()) {
    StarPolygon out = *s;
    for (auto& v : out.vertices) v += offset;
    out.center += offset;
    return Shape(std::move(out));
  }
  std::vector<Point> verts = vertices();
  for (auto& v : verts) v += offset;
  return convex_polytope(std::move(verts));
}

Shape Shape::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error("scale factor must be positive");
  if (const auto* b = as_ball()) return Shape(Ball{b->center * factor, b->radius * factor});
  if (const auto* s = as_star()) {
    StarPolygon out = *s;
    for (auto& v : out.vertices) v *= factor;
    out.center *= factor;
    return Shape(std::move(out));
  }
  std::vector<Point> verts = vertices();
  for (auto& v : verts) v *= factor;
  return convex_polytope(std::move(verts));
}

Shape Shape::rotated(double angle, const Point& pivot) const {
  if (dim() != 2) throw Error("rotation is only defined for planar shapes");
  require_same_dim(pivot, 2);
  const double c = std::cos(angle), s = std::sin(angle);
  auto rot = [&](const Point& p) {
    const Point q = p - pivot;
    return Point(pivot + make_point({c * q[0] - s * q[1], s * q[0] + c * q[1]}));
  };
  if (const auto* b = as_ball()) return Shape(Ball{rot(b->center), b->radius});
  if (const auto* st = as_star()) {
    StarPolygon out = *st;
    for (auto& v : out.vertices) v = rot(v);
    out.center = rot(out.center);
    return Shape(std::move(out));
  }
  std::vector<Point> verts = vertices();
  for (auto& v : verts) v = rot(v);
  return convex_polytope(std::move(verts));
}

std::string Shape::describe() const {
  std::ostringstream os;
  os.precision(17);
  auto pt = [&](const Point& p) {
    for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  };
  if (const auto* b = as_ball()) {
    os << "ball ";
    pt(b->center);
    os << " " << b->radius;
    return os.str();
  }
  if (const auto* s = as_star()) {
    os << "star center=";
    pt(s->center);
  } else {
    os << "polytope";
  }
  for (const auto& v : vertices()) {
    os << " ";
    pt(v);
  }
  return os.str();
}

double dist_point_shape(const Point& p, const Shape& s) {
  require_same_dim(p, s.dim());
  if (const auto* b = s.as_ball()) return std::max(0.0, (p - b->center).norm() - b->radius);
  if (const auto* poly = s.as_polytope()) return polytope_distance(p, *poly);
  const auto& star = *s.as_star();
  const double md = polygon_boundary_distance(p, star.vertices);
  if (md == 0.0 || point_in_polygon(p, star.vertices)) return 0.0;
  return md;
}

double signed_distance(const Point& p, const Shape& s) {
  require_same_dim(p, s.dim());
  if (const auto* b = s.as_ball()) return (p - b->center).norm() - b->radius;
  if (const auto* poly = s.as_polytope()) {
    if (poly->facet_normals.empty()) return polytope_distance(p, *poly);
    double depth = kInf;
    for (std::size_t f = 0; f < poly->facet_normals.size(); ++f) {
      depth = std::min(depth, poly->facet_offsets[f] - poly->facet_normals[f].dot(p));
    }
    return depth >= 0.0 ? -depth : polytope_distance(p, *poly);
  }
  const auto& star = *s.as_star();
  const double md = polygon_boundary_distance(p, star.vertices);
  return point_in_polygon(p, star.vertices) ? -md : md;
}

bool in_neighborhood(const Point& p, const Shape& s, double eps) {
  if (!(eps > 0.0)) throw Error("neighborhood radius must be positive");
  return dist_point_shape(p, s) < eps;
}

DirectedHausdorff directed_hausdorff_bound(const Shape& from, const Shape& to) {
  if (from.dim() != to.dim()) throw DimensionMismatch(to.dim(), from.dim());
  if (is_convex_kind(to)) {
    if (const auto* b = from.as_ball()) {
      return {std::max(0.0, b->radius + signed_distance(b->center, to)), 0.0};
    }
    double best = 0.0;
    for (const auto& v : from.vertices()) best = std::max(best, dist_point_shape(v, to));
    return {best, 0.0};
  }
  const auto& star = *to.as_star();
  if (const auto* b = from.as_ball()) return sup_distance_on_circle(*b, to);
  std::vector<Point> boundary;
  if (const auto* poly = from.as_polytope()) boundary = poly->hull2d;
  else boundary = from.as_star()->vertices;
  if (boundary.size() == 1) return {dist_point_shape(boundary[0], to), 0.0};
  double best = 0.0;
  const std::size_t edges = boundary.size() == 2 ? 1 : boundary.size();
  for (std::size_t i = 0; i < edges; ++i) {
    best = std::max(best, sup_distance_on_segment(boundary[i], boundary[(i + 1) % boundary.size()],
                                                  star, to));
  }
  return {best, 0.0};
}

double directed_hausdorff(const Shape& from, const Shape& to) {
  return directed_hausdorff_bound(from, to).value;
}

double hausdorff(const Shape& s, const Shape& t) {
  return std::max(directed_hausdorff(s, t), directed_hausdorff(t, s));
}

double hausdorff(std::span<const Point> a, std::span<const Point> b) {
  if (a.empty() || b.empty()) throw Error("hausdorff of empty point set");
  auto directed = [](std::span<const Point> from, std::span<const Point> to) {
    double cmax = 0.0;
    for (const auto& x : from) {
      double cmin = kInf;
      for (const auto& y : to) {
        const double d2 = (x - y).squaredNorm();
        if (d2 < cmin) {
          cmin = d2;
          if (cmin <= cmax) break;
        }
      }
      cmax = std::max(cmax, cmin);
    }
    return std::sqrt(cmax);
  };
  return std::max(directed(a, b), directed(b, a));
}

double correspondence_bound(const Shape& s, const Shape& t) {
  if (s.kind() != t.kind() || s.dim() != t.dim()) return kInf;
  if (const auto* a = s.as_ball()) {
    const auto* b = t.as_ball();
    return (a->center - b->center).norm() + std::abs(a->radius - b->radius);
  }
  const auto& vs = s.vertices();
  const auto& vt = t.vertices();
  if (vs.size() != vt.size()) return kInf;
  double worst = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) worst = std::max(worst, (vs[i] - vt[i]).norm());
  // Star polygons are unions of the triangles (center, v_i, v_i+1).
  if (s.as_star() != nullptr) worst = std::max(worst, (s.star_center() - t.star_center()).norm());
  return worst;
}

double directed_hausdorff_within(const Shape& s, const Shape& t, double budget) {
  const double bound = correspondence_bound(s, t);
  return bound <= budget ? bound : directed_hausdorff(s, t);
}

double hausdorff_within(const Shape& s, const Shape& t, double budget) {
  const double bound = correspondence_bound(s, t);
  return bound <= budget ? bound : hausdorff(s, t);
}

bool neighborhood_included(const Shape& s, double a, const Shape& t, double b, double slack) {
  return directed_hausdorff(s, t) <= b - a + slack;
}

bool is_star_shaped(const Shape& s) {
  const auto* star = s.as_star();
  if (star == nullptr) return true;
  const auto& v = star->vertices;
  const std::size_t n = v.size();
  const Point& c = star->center;
  if (n < 3) return false;
  // simplicity
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == v[(i + 1) % n]) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
    }
  }
  if (!point_in_polygon(c, v) || polygon_boundary_distance(c, v) == 0.0) return false;
  // angular monotonicity around the center
  double total = 0.0;
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = v[i] - c, b = v[(i + 1) % n] - c;
    const double turn = std::atan2(cross2(a, b), a.dot(b));
    const int sg = turn > 0 ? 1 : (turn < 0 ? -1 : 0);
    if (sg == 0 || (sign != 0 && sg != sign)) return false;
    sign = sg;
    total += turn;
  }
  if (std::abs(std::abs(total) - 2.0 * std::numbers::pi) > 1e-9) return false;
  // every vertex visible from the center
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || (j + 1) % n == i) continue;
      if (segments_intersect(c, v[i], v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

Point min_norm_point(std::span<const Point> pts) {
  if (pts.empty()) throw Error("min_norm_point of empty set");
  double scale = 1.0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    scale = std::max(scale, pts[i].squaredNorm());
    if (pts[i].squaredNorm() < pts[start].squaredNorm()) start = i;
  }
  const double tol = 1e-14 * scale;
  std::vector<std::size_t> active{start};
  std::vector<double> lambda{1.0};
  Point x = pts[start];
  auto combine = [&]() {
    Point y = Point::Zero(pts[0].size());
    for (std::size_t i = 0; i < active.size(); ++i) y += lambda[i] * pts[active[i]];
    return y;
  };
  for (int major = 0; major < 1000; ++major) {
    std::size_t j = 0;
    double best = kInf;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double v = x.dot(pts[i]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (best >= x.squaredNorm() - tol) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);
    lambda.push_back(0.0);
    for (int minor = 0; minor < 100; ++minor) {
      const auto k = static_cast<Eigen::Index>(active.size());
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + 1, k + 1);
      for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index s = 0; s < k; ++s) a(r, s) = pts[active[r]].dot(pts[active[s]]);
        a(r, k) = 1.0;
        a(k, r) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs[k] = 1.0;
      const Eigen::VectorXd sol = a.fullPivLu().solve(rhs);
      bool positive = true;
      for (Eigen::Index r = 0; r < k; ++r) positive = positive && sol[r] > 1e-12;
      if (positive) {
        for (Eigen::Index r = 0; r < k; ++r) lambda[r] = sol[r];
        x = combine();
        break;
      }
      double theta = 1.0;
      for (Eigen::Index r = 0; r < k; ++r) {
        if (sol[r] <= 1e-12 && lambda[r] - sol[r] > 0.0) {
          theta = std::min(theta, lambda[r] / (lambda[r] - sol[r]));
        }
      }
      for (Eigen::Index r = 0; r < k; ++r) lambda[r] += theta * (sol[r] - lambda[r]);
      std::size_t drop = 0;
      for (std::size_t r = 1; r < lambda.size(); ++r) {
        if (lambda[r] < lambda[drop]) drop = r;
      }
      for (std::size_t r = lambda.size(); r-- > 0;) {
        if (lambda[r] <= 1e-12 || r == drop) {
          lambda.erase(lambda.begin() + static_cast<std::ptrdiff_t>(r));
          active.erase(active.begin() + static_cast<std::ptrdiff_t>(r));
        }
      }
      double sum = 0.0;
      for (double l : lambda) sum += l;
      for (double& l : lambda) l /= sum;
      x = combine();
    }
  }
  return x;
}

}  // namespace nearsel
