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

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nearsel/types.hpp"

namespace nearsel {

enum class ShapeKind { kBall, kConvexPolytope, kStarPolygon };

struct Ball {
  Point center;
  double radius = 0.0;
};

// Convex hull of a finite point list. The hull is kept in H-representation
// (unit outward normals and offsets) when it is full dimensional; `hull2d`
// holds the counter-clockwise hull polygon in the plane.
struct ConvexPolytope {
  std::vector<Point> vertices;
  std::vector<Point> facet_normals;
  std::vector<double> facet_offsets;
  std::vector<Point> hull2d;
  Point centroid;
};

// Simple polygon in the plane, every vertex visible from `center`.
struct StarPolygon {
  std::vector<Point> vertices;
  Point center;
};

class Shape {
 public:
  static Shape ball(Point center, double radius);
  static Shape convex_polytope(std::vector<Point> vertices);
  // Validates simplicity and star-shapedness; throws Error otherwise.
  static Shape star_polygon(std::vector<Point> vertices, Point center);
  // Skips validation. Only meant for exercising the failure paths of
  // consumers that check star-shapedness themselves.
  static Shape star_polygon_unchecked(std::vector<Point> vertices, Point center);
  // Star with `points` outer tips at radius `outer` and inner vertices at
  // radius `inner`, first tip at angle `phase`.
  static Shape regular_star(const Point& center, int points, double outer,
                            double inner, double phase = 0.0);

  ShapeKind kind() const;
  int dim() const;
  const Point& star_center() const;
  // Polytope input vertices or polygon vertices; empty for balls.
  const std::vector<Point>& vertices() const;
  // max |y - c| over y in the shape.
  double radius_about(const Point& c) const;

  Shape translated(const Point& offset) const;
  // Scales about the origin; factor must be positive.
  Shape scaled(double factor) const;
  // Planar rotation about `pivot`.
  Shape rotated(double angle, const Point& pivot) const;

  const Ball* as_ball() const { return std::get_if<Ball>(&rep_); }
  const ConvexPolytope* as_polytope() const {
    return std::get_if<ConvexPolytope>(&rep_);
  }
  const StarPolygon* as_star() const { return std::get_if<StarPolygon>(&rep_); }

  std::string describe() const;

 private:
  using Rep = std::variant<Ball, ConvexPolytope, StarPolygon>;
  explicit Shape(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

// Exact Euclidean distance from p to the compact set S (0 iff p in S).
double dist_point_shape(const Point& p, const Shape& s);

// Negative inside the interior (minus the distance to the boundary), the
// ordinary distance outside. Lower dimensional polytopes have no interior.
double signed_distance(const Point& p, const Shape& s);

// True iff dist_point_shape(p, s) < eps; open neighborhoods are strict.
bool in_neighborhood(const Point& p, const Shape& s, double eps);

struct DirectedHausdorff {
  double value = 0.0;     // certified upper bound of sup_{y in S} d(y, T)
  double tolerance = 0.0; // 0 when computed by closed form / enumeration
};

// sup over y in `from` of dist(y, to).
//
// Convex targets use closed forms: for a convex target the distance function
// is convex, so its sup over a polygonal source is attained at a vertex, and
// for a ball source it equals r + signed_distance(center). Star-shaped targets
// use the fact that distance to a star-shaped set increases along rays from
// its center, which pushes the sup to the boundary of the source; polygon
// edges are then resolved by enumerating feature bisector crossings and
// circles by a Lipschitz branch and bound with the returned tolerance.
DirectedHausdorff directed_hausdorff_bound(const Shape& from, const Shape& to);
double directed_hausdorff(const Shape& from, const Shape& to);

double hausdorff(const Shape& s, const Shape& t);

// Hausdorff distance between finite point sets (early-break scan).
double hausdorff(std::span<const Point> a, std::span<const Point> b);

// Upper bound on hausdorff(s, t) from matching generators: vertex i of s
// against vertex i of t, plus centers for star polygons and center and
// radius for balls. +inf unless both shapes have the same kind and size.
double correspondence_bound(const Shape& s, const Shape& t);

// Returns a value v with directed_hausdorff(s, t) <= v, exact unless the
// correspondence bound already stays within `budget`.
double directed_hausdorff_within(const Shape& s, const Shape& t, double budget);
// Same for the symmetric distance.
double hausdorff_within(const Shape& s, const Shape& t, double budget);

// Inclusion of open neighborhoods O_a(S) in O_b(T), decided as
// directed_hausdorff(S, T) <= b - a + slack.
bool neighborhood_included(const Shape& s, double a, const Shape& t, double b,
                           double slack = 1e-12);

// Segment visibility test used by star_polygon(); also exposed for witnesses
// that need to re-check values produced by custom maps.
bool is_star_shaped(const Shape& s);

// Minimum norm point of conv(points) (Wolfe's algorithm).
Point min_norm_point(std::span<const Point> points);

}  // namespace nearsel
