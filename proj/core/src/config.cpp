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

#include "nearsel/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <vector>

namespace nearsel {
namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "domain.file",    "domain.inline",    "map.kind",      "map.shape",
      "map.velocity",   "map.scale0",       "map.scale_rate", "map.pivot",
      "map.angle0",     "map.angular_rate", "eps.kind",      "eps.value",
      "eps.gradient",   "run.variant",      "run.depth",     "run.samples",
      "run.seed",       "run.out",          "run.svg",       "run.max_depth",
      "run.element_samples", "run.homotopy_points"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(what + ": expected a number, got '" + text + "'");
  }
}

long long parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(what + ": expected an integer, got '" + text + "'");
  }
}

std::uint64_t parse_seed(const std::string& text) {
  try {
    std::size_t used = 0;
    if (!text.empty() && text.front() == '-') throw std::invalid_argument(text);
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("run.seed: expected a nonnegative integer, got '" + text + "'");
  }
}

std::size_t parse_count(const RunConfig& cfg, const std::string& key, std::size_t fallback) {
  if (!cfg.has(key)) return fallback;
  const long long v = parse_int(cfg.get(key), key);
  if (v < 1) throw ConfigError(key + " must be positive");
  return static_cast<std::size_t>(v);
}

// `name=value` option inside a shape literal.
bool take_option(const std::string& word, const std::string& name, std::string* value) {
  const std::string prefix = name + "=";
  if (word.rfind(prefix, 0) != 0) return false;
  *value = word.substr(prefix.size());
  return true;
}

}  // namespace

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw ConfigError("missing key " + key);
  return it->second;
}

std::string RunConfig::get_or(const std::string& key, const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!known_keys().count(key)) throw ConfigError("unknown key " + key);
  values[key] = value;
}

RunConfig parse_config(std::istream& in, const std::string& base_dir) {
  RunConfig cfg;
  cfg.base_dir = base_dir;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (!known_keys().count(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key " + key);
    if (cfg.values.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key " + key);
    if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for " + key);
    cfg.values[key] = value;
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  const auto parent = std::filesystem::path(path).parent_path();
  RunConfig cfg = parse_config(in, parent.empty() ? "." : parent.string());
  cfg.path = path;
  return cfg;
}

Point parse_point(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.empty() || parts.size() > 3) throw ConfigError("point '" + text + "' needs 1 to 3 coordinates");
  Point p(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) p[static_cast<Eigen::Index>(i)] = parse_double(parts[i], "point");
  return p;
}

SmallMatrix parse_matrix(const std::string& text) {
  const auto rows = split(text, ';');
  if (rows.empty() || rows.size() > 3) throw ConfigError("matrix '" + text + "' needs 1 to 3 rows");
  std::vector<Point> parsed;
  for (const auto& r : rows) parsed.push_back(parse_point(r));
  const auto cols = parsed.front().size();
  SmallMatrix m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (parsed[i].size() != cols) throw ConfigError("matrix '" + text + "' has ragged rows");
    m.row(static_cast<Eigen::Index>(i)) = parsed[i].transpose();
  }
  return m;
}

Variant parse_variant(const std::string& text) {
  if (text == "uv_infty") return Variant::kGlued;
  if (text == "uv_omega") return Variant::kSkeleton;
  throw ConfigError("variant must be uv_infty or uv_omega, got '" + text + "'");
}

Shape parse_shape(const std::string& literal) {
  const auto w = words(literal);
  if (w.empty()) throw ConfigError("empty shape literal");
  try {
    if (w[0] == "ball") {
      if (w.size() != 3) throw ConfigError("ball needs a center and a radius");
      return Shape::ball(parse_point(w[1]), parse_double(w[2], "ball radius"));
    }
    if (w[0] == "polytope") {
      std::vector<Point> verts;
      for (std::size_t i = 1; i < w.size(); ++i) verts.push_back(parse_point(w[i]));
      return Shape::convex_polytope(std::move(verts));
    }
    if (w[0] == "star") {
      std::string c;
      if (w.size() < 2 || !take_option(w[1], "center", &c)) throw ConfigError("star needs center=<point> first");
      std::vector<Point> verts;
      for (std::size_t i = 2; i < w.size(); ++i) verts.push_back(parse_point(w[i]));
      return Shape::star_polygon(std::move(verts), parse_point(c));
    }
    if (w[0] == "regular_star") {
      std::string center, points, outer, inner, phase = "0";
      for (std::size_t i = 1; i < w.size(); ++i) {
        if (!take_option(w[i], "center", &center) && !take_option(w[i], "points", &points) &&
            !take_option(w[i], "outer", &outer) && !take_option(w[i], "inner", &inner) &&
            !take_option(w[i], "phase", &phase)) {
          throw ConfigError("regular_star: unknown option '" + w[i] + "'");
        }
      }
      if (center.empty() || points.empty() || outer.empty() || inner.empty()) {
        throw ConfigError("regular_star needs center=, points=, outer= and inner=");
      }
      return Shape::regular_star(parse_point(center), static_cast<int>(parse_int(points, "points")),
                                 parse_double(outer, "outer"), parse_double(inner, "inner"),
                                 parse_double(phase, "phase"));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("shape '" + literal + "': " + e.what());
  }
  throw ConfigError("unknown shape kind '" + w[0] + "'");
}

namespace {

DomainComplex build_domain(const RunConfig& cfg) {
  const bool file = cfg.has("domain.file");
  const bool inl = cfg.has("domain.inline");
  if (file == inl) throw ConfigError("give exactly one of domain.file and domain.inline");
  try {
    if (file) {
      std::filesystem::path p(cfg.get("domain.file"));
      if (p.is_relative()) p = std::filesystem::path(cfg.base_dir) / p;
      std::ifstream in(p);
      if (!in) throw ConfigError("cannot read domain file " + p.string());
      return read_domain(in);
    }
    std::string text = "domain v1 " + cfg.get("domain.inline");
    std::replace(text.begin(), text.end(), ';', '\n');
    std::istringstream in(text);
    return read_domain(in);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
}

SetValuedMap build_map(const RunConfig& cfg, int m) {
  const std::string kind = cfg.get("map.kind");
  const Shape base = parse_shape(cfg.get("map.shape"));
  const int d = base.dim();
  auto vector_or_zero = [&](const std::string& key, int size) {
    if (!cfg.has(key)) return Point(Point::Zero(size));
    Point p = parse_point(cfg.get(key));
    if (p.size() != size) throw ConfigError(key + " needs " + std::to_string(size) + " coordinates");
    return p;
  };
  auto velocity = [&](bool required) {
    if (!cfg.has("map.velocity")) {
      if (required) throw ConfigError("missing key map.velocity");
      return SmallMatrix(SmallMatrix::Zero(d, m));
    }
    SmallMatrix v = parse_matrix(cfg.get("map.velocity"));
    if (v.rows() != d || v.cols() != m) {
      throw ConfigError("map.velocity must be " + std::to_string(d) + "x" + std::to_string(m));
    }
    return v;
  };
  auto reject = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      if (cfg.has(k)) throw ConfigError(std::string(k) + " does not apply to map.kind " + kind);
    }
  };
  try {
    if (kind == "constant") {
      reject({"map.velocity", "map.scale0", "map.scale_rate", "map.pivot", "map.angle0", "map.angular_rate"});
      return SetValuedMap::constant(m, base);
    }
    if (kind == "translating") {
      reject({"map.scale0", "map.scale_rate", "map.pivot", "map.angle0", "map.angular_rate"});
      return SetValuedMap::translating(base, velocity(true));
    }
    if (kind == "scaling") {
      reject({"map.pivot", "map.angle0", "map.angular_rate"});
      const double s0 = cfg.has("map.scale0") ? parse_double(cfg.get("map.scale0"), "map.scale0") : 1.0;
      return SetValuedMap::scaling(base, s0, vector_or_zero("map.scale_rate", m), velocity(false));
    }
    if (kind == "rotating_star") {
      reject({"map.velocity", "map.scale0", "map.scale_rate"});
      if (!cfg.has("map.angular_rate")) throw ConfigError("missing key map.angular_rate");
      const double a0 = cfg.has("map.angle0") ? parse_double(cfg.get("map.angle0"), "map.angle0") : 0.0;
      return SetValuedMap::rotating_star(base, vector_or_zero("map.pivot", d), a0,
                                         vector_or_zero("map.angular_rate", m));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("map: ") + e.what());
  }
  throw ConfigError("unknown map.kind '" + kind + "'");
}

EpsFunction build_eps(const RunConfig& cfg, const DomainComplex& k) {
  const std::string kind = cfg.get_or("eps.kind", "constant");
  const double value = parse_double(cfg.get("eps.value"), "eps.value");
  EpsFunction eps = EpsFunction::constant(value);
  if (kind == "constant") {
    if (cfg.has("eps.gradient")) throw ConfigError("eps.gradient needs eps.kind = affine");
  } else if (kind == "affine") {
    Point g = parse_point(cfg.get("eps.gradient"));
    if (g.size() != k.ambient_dim()) throw ConfigError("eps.gradient must match the domain dimension");
    eps = EpsFunction::affine(value, g);
  } else {
    throw ConfigError("eps.kind must be constant or affine");
  }
  try {
    eps.min_on(k);
  } catch (const Error& e) {
    throw ConfigError(std::string("eps: ") + e.what());
  }
  return eps;
}

Scenario scenario_from(const RunConfig& cfg) {
  DomainComplex k = build_domain(cfg);
  SetValuedMap phi = build_map(cfg, k.ambient_dim());
  EpsFunction eps = build_eps(cfg, k);
  Scenario sc{std::move(k), phi, straight_line_witness(phi), std::move(eps)};
  sc.variant = parse_variant(cfg.get_or("run.variant", "uv_infty"));
  sc.samples = parse_count(cfg, "run.samples", sc.samples);
  sc.element_samples = parse_count(cfg, "run.element_samples", sc.element_samples);
  sc.homotopy_points = parse_count(cfg, "run.homotopy_points", sc.homotopy_points);
  if (cfg.has("run.seed")) sc.seed = parse_seed(cfg.get("run.seed"));
  if (cfg.has("run.depth")) {
    const long long depth = parse_int(cfg.get("run.depth"), "run.depth");
    if (depth < sc.domain.dimension() + 1 || depth > 16) {
      throw ConfigError("run.depth must be between m+1 = " + std::to_string(sc.domain.dimension() + 1) +
                        " and 16");
    }
    sc.tower_depth = static_cast<int>(depth);
  }
  if (cfg.has("run.max_depth")) {
    const long long d = parse_int(cfg.get("run.max_depth"), "run.max_depth");
    if (d < 0 || d > kMaxRefineDepth) {
      throw ConfigError("run.max_depth must be between 0 and " + std::to_string(kMaxRefineDepth));
    }
    sc.max_fine_depth = static_cast<int>(d);
  }
  return sc;
}

}  // namespace

Scenario build_scenario(const RunConfig& cfg) {
  try {
    return scenario_from(cfg);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

std::string output_dir(const RunConfig& cfg) { return cfg.get_or("run.out", "nearsel_out"); }

bool svg_requested(const RunConfig& cfg) {
  const std::string v = cfg.get_or("run.svg", "true");
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("run.svg must be true or false");
}

}  // namespace nearsel
