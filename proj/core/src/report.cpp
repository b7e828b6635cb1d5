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

#include "nearsel/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace nearsel {
namespace {

using Json = nlohmann::ordered_json;

// JSON has no infinity; unset minima become null.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json point_json(const Point& p) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(num(p[i]));
  return a;
}

Json scenario_json(const Scenario& sc) {
  Json j;
  Json dom;
  dom["ambient_dim"] = sc.domain.ambient_dim();
  dom["dimension"] = sc.domain.dimension();
  Json verts = Json::array();
  for (const auto& v : sc.domain.vertices()) verts.push_back(point_json(v));
  dom["vertices"] = verts;
  dom["facets"] = sc.domain.facets();
  j["domain"] = dom;
  Json map;
  map["kind"] = to_string(sc.phi.kind());
  map["description"] = sc.phi.description();
  map["lipschitz"] = num(sc.phi.modulus().lipschitz_constant());
  map["witness"] = sc.witness.name();
  j["map"] = map;
  j["eps"] = sc.eps.describe();
  j["seed"] = sc.seed;
  j["samples"] = sc.samples;
  j["tower_depth"] = sc.tower_depth > 0 ? sc.tower_depth : sc.domain.dimension() + 1;
  j["element_samples"] = sc.element_samples;
  j["homotopy_points"] = sc.homotopy_points;
  return j;
}

Json tower_json(const Construction& c) {
  Json j;
  Json pre;
  pre["depth"] = c.tower->pre().depth;
  pre["radius"] = num(c.tower->pre().radius);
  pre["elements"] = c.tower->pre().anchors.size();
  j["bound_cover"] = pre;
  Json levels = Json::array();
  for (const auto& lv : c.tower->levels()) {
    Json l;
    l["index"] = lv.index;
    l["eps"] = num(lv.eps);
    l["delta"] = num(lv.delta);
    l["radius"] = num(lv.radius);
    l["lattice_depth"] = lv.lattice_depth;
    l["stored_elements"] = c.registry->level(lv.index).size();
    levels.push_back(l);
  }
  j["levels"] = levels;
  Json stats = Json::array();
  for (const auto& s : c.tower_audit.stats) {
    Json st;
    st["name"] = s.name;
    st["level"] = s.level;
    st["checks"] = s.checks;
    st["min_slack"] = num(s.min_slack);
    st["strict"] = s.strict;
    st["worst"] = s.worst;
    stats.push_back(st);
  }
  j["audit"] = stats;
  j["min_slack"] = num(c.tower_audit.min_slack());
  return j;
}

Json refinement_json(const Construction& c) {
  const auto& a = c.refinement_audit;
  Json j;
  j["fine_depth"] = c.sys->fine_depth();
  j["star_radius"] = num(c.sys->star_radius());
  j["fine_simplices"] = c.mat->simplices().size();
  j["elements"] = c.mat->elements().size();
  j["samples"] = a.samples;
  j["uncovered"] = a.uncovered;
  j["disjointness_violations"] = a.disjointness_violations;
  j["containment_checks"] = a.containment_checks;
  j["min_containment_slack"] = num(a.min_containment_slack);
  j["min_certificate_slack"] = num(a.min_certificate_slack);
  return j;
}

Json nerve_json(const Construction& c) {
  Json j;
  j["vertices"] = c.nerve.complex.vertices().size();
  j["simplices"] = c.nerve.complex.size();
  j["maximal"] = c.nerve.complex.maximal().size();
  j["dimension"] = c.nerve.complex.dimension();
  j["confirmed_chains"] = c.nerve.confirmed;
  Json layers = Json::array();
  for (const auto& l : c.filtration->layers()) layers.push_back(l.size());
  j["layer_sizes"] = layers;
  j["filtration_checks"] = c.filtration_check.checked;
  j["filtration_failures"] = c.filtration_check.failures.size();
  j["transport_slack"] = num(c.transport_slack);
  return j;
}

Json homotopy_json(const HomotopyAudit& a) {
  Json j;
  j["vertices"] = a.vertices;
  j["vertex_mismatches"] = a.vertex_mismatches;
  j["face_checks"] = a.face_checks;
  j["max_face_gap"] = num(a.max_face_gap);
  j["containment_checks"] = a.containment_checks;
  j["min_containment_slack"] = num(a.min_containment_slack);
  j["worst"] = a.worst;
  return j;
}

Json certificate_json(const VerificationReport& v) {
  Json j;
  j["samples"] = v.x.size();
  j["min_margin"] = num(v.min_margin);
  j["violations"] = v.violations.size();
  j["max_adjacent_jump"] = num(v.max_adjacent_jump);
  j["clean"] = v.ok();
  return j;
}

std::string g17(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

}  // namespace

std::string report_json(const Scenario& sc, const SelectionResult& r) {
  const Construction& c = r.construction();
  Json j;
  j["status"] = r.verification.ok() ? "ok" : "certificate_failed";
  j["variant"] = to_string(r.variant());
  j["scenario"] = scenario_json(sc);
  j["tower"] = tower_json(c);
  j["refinement"] = refinement_json(c);
  j["nerve"] = nerve_json(c);
  j["homotopy"] = homotopy_json(r.homotopy_audit);
  j["certificate"] = certificate_json(r.verification);
  return j.dump(2) + "\n";
}

std::string failure_report_json(const Scenario& sc, const std::string& stage, const std::string& detail) {
  Json j;
  j["status"] = "stage_failed";
  j["variant"] = to_string(sc.variant);
  j["stage"] = stage;
  j["detail"] = detail;
  j["scenario"] = scenario_json(sc);
  return j.dump(2) + "\n";
}

void write_samples_csv(std::ostream& out, const VerificationReport& v) {
  if (v.x.empty()) return;
  const auto m = v.x.front().size();
  const auto d = v.fx.front().size();
  for (Eigen::Index i = 0; i < m; ++i) out << "x" << i << ",";
  for (Eigen::Index i = 0; i < d; ++i) out << "f" << i << ",";
  out << "dist,eps\n";
  for (std::size_t k = 0; k < v.x.size(); ++k) {
    for (Eigen::Index i = 0; i < m; ++i) out << g17(v.x[k][i]) << ",";
    for (Eigen::Index i = 0; i < d; ++i) out << g17(v.fx[k][i]) << ",";
    out << g17(v.dist[k]) << "," << g17(v.eps[k]) << "\n";
  }
}

std::vector<SampleRow> read_samples_csv(std::istream& in, int domain_dim) {
  std::string line;
  if (!std::getline(in, line)) throw Error("samples file is empty");
  std::size_t columns = 1;
  for (char ch : line) columns += ch == ',' ? 1 : 0;
  const int value_dim = static_cast<int>(columns) - domain_dim - 2;
  if (value_dim < 1 || value_dim > 3) throw Error("samples header does not match the domain dimension");
  std::vector<SampleRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::logic_error&) {
        throw Error("samples line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (vals.size() != columns) throw Error("samples line " + std::to_string(lineno) + ": wrong column count");
    SampleRow r;
    r.x = Point::Map(vals.data(), domain_dim);
    r.fx = Point::Map(vals.data() + domain_dim, value_dim);
    r.dist = vals[columns - 2];
    r.eps = vals[columns - 1];
    rows.push_back(std::move(r));
  }
  return rows;
}

bool svg_supported(const Scenario& sc) {
  if (sc.domain.ambient_dim() > 2) return false;
  return sc.phi(sc.domain.vertices().front()).dim() == 2;
}

void write_svg(std::ostream& out, const Scenario& sc, const VerificationReport& v, std::size_t traces) {
  if (!svg_supported(sc)) throw Error("SVG output needs a 1D or 2D domain with planar values");
  // Domain points are drawn in the plane, on the x axis for 1D domains.
  auto lift = [](const Point& p) { return p.size() == 1 ? Point(make_point({p[0], 0.0})) : p; };

  std::vector<std::size_t> picks;
  if (!v.x.empty() && traces > 0) {
    const std::size_t n = std::min(traces, v.x.size());
    for (std::size_t i = 0; i < n; ++i) picks.push_back(n == 1 ? 0 : i * (v.x.size() - 1) / (n - 1));
  }
  std::vector<std::vector<Point>> outlines;
  for (std::size_t i : picks) {
    const Shape s = sc.phi(v.x[i]);
    std::vector<Point> poly;
    if (const auto* b = s.as_ball()) {
      for (int k = 0; k < 64; ++k) {
        const double a = 2.0 * std::numbers::pi * k / 64.0;
        poly.push_back(b->center + b->radius * make_point({std::cos(a), std::sin(a)}));
      }
    } else if (const auto* p = s.as_polytope()) {
      poly = p->hull2d.empty() ? p->vertices : p->hull2d;
    } else {
      poly = s.vertices();
    }
    outlines.push_back(std::move(poly));
  }

  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
  double hi_x = -lo_x, hi_y = -lo_x;
  auto grow = [&](const Point& p) {
    lo_x = std::min(lo_x, p[0]);
    hi_x = std::max(hi_x, p[0]);
    lo_y = std::min(lo_y, p[1]);
    hi_y = std::max(hi_y, p[1]);
  };
  for (const auto& vtx : sc.domain.vertices()) grow(lift(vtx));
  for (const auto& poly : outlines) {
    for (const auto& p : poly) grow(p);
  }
  for (const auto& y : v.fx) grow(y);
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  const double pad = 0.05 * span;
  const double size = 800.0;
  const double scale = size / (span + 2 * pad);
  auto sx = [&](double x) { return g17((x - lo_x + pad) * scale); };
  auto sy = [&](double y) { return g17((hi_y - y + pad) * scale); };
  const double w = (hi_x - lo_x + 2 * pad) * scale;
  const double h = (hi_y - lo_y + 2 * pad) * scale;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << g17(w) << "\" height=\"" << g17(h)
      << "\" viewBox=\"0 0 " << g17(w) << " " << g17(h) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g id=\"domain\" fill=\"#e8e8e8\" stroke=\"#888\" stroke-width=\"1\">\n";
  for (const auto& f : sc.domain.facets()) {
    out << "<polygon points=\"";
    for (int idx : f) {
      const Point p = lift(sc.domain.vertices()[static_cast<std::size_t>(idx)]);
      out << sx(p[0]) << "," << sy(p[1]) << " ";
    }
    out << "\"/>\n";
  }
  out << "</g>\n<g id=\"values\" fill=\"none\" stroke=\"#3060c0\" stroke-opacity=\"0.5\" stroke-width=\"1\">\n";
  for (const auto& poly : outlines) {
    out << "<polygon points=\"";
    for (const auto& p : poly) out << sx(p[0]) << "," << sy(p[1]) << " ";
    out << "\"/>\n";
  }
  out << "</g>\n<g id=\"selection\" fill=\"#c03030\">\n";
  for (const auto& y : v.fx) out << "<circle cx=\"" << sx(y[0]) << "\" cy=\"" << sy(y[1]) << "\" r=\"1.2\"/>\n";
  out << "</g>\n<g id=\"traced\" fill=\"#102060\">\n";
  for (std::size_t i : picks) {
    const Point p = lift(v.x[i]);
    out << "<circle cx=\"" << sx(p[0]) << "\" cy=\"" << sy(p[1]) << "\" r=\"3\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void write_timings(std::ostream& out, const std::map<std::string, double>& prepare_seconds,
                   const std::map<std::string, double>& select_seconds) {
  out << "stage,seconds\n";
  double total = 0.0;
  for (const auto* m : {&prepare_seconds, &select_seconds}) {
    for (const auto& [stage, s] : *m) {
      out << stage << "," << s << "\n";
      total += s;
    }
  }
  out << "total," << total << "\n";
}

}  // namespace nearsel
