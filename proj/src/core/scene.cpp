#include "core/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/rng.hpp"

namespace chanpred::scene {

namespace {

double signed_area(const std::vector<Vec2>& poly) {
  double a = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

// Proper or touching intersection of segments [p1,p2] and [q1,q2];
// on hit, appends the parameter t along [p1,p2].
void edge_crossings(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2,
                    std::vector<double>& ts) {
  const double rx = p2.x - p1.x, ry = p2.y - p1.y;
  const double sx = q2.x - q1.x, sy = q2.y - q1.y;
  const double denom = cross(rx, ry, sx, sy);
  const double qpx = q1.x - p1.x, qpy = q1.y - p1.y;
  if (denom == 0.0) return;  // parallel/collinear: no transversal crossing
  const double t = cross(qpx, qpy, sx, sy) / denom;
  const double u = cross(qpx, qpy, rx, ry) / denom;
  if (t > 0.0 && t < 1.0 && u >= 0.0 && u <= 1.0) ts.push_back(t);
}

bool segments_properly_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1,
                                 const Vec2& q2) {
  const double d1 = cross(p2.x - p1.x, p2.y - p1.y, q1.x - p1.x, q1.y - p1.y);
  const double d2 = cross(p2.x - p1.x, p2.y - p1.y, q2.x - p1.x, q2.y - p1.y);
  const double d3 = cross(q2.x - q1.x, q2.y - q1.y, p1.x - q1.x, p1.y - q1.y);
  const double d4 = cross(q2.x - q1.x, q2.y - q1.y, p2.x - q1.x, p2.y - q1.y);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool polygon_is_simple(const std::vector<Vec2>& poly) {
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      // skip adjacent edges (shared vertex)
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_properly_intersect(poly[i], poly[(i + 1) % n], poly[j],
                                      poly[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

int material_index(const Scene& s, const std::string& name) {
  for (size_t i = 0; i < s.materials.size(); ++i)
    if (s.materials[i].name == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown material '" + name + "'");
}

struct Rect {
  double x0, y0, x1, y1;
};

bool rects_overlap(const Rect& a, const Rect& b, double gap) {
  return a.x0 - gap < b.x1 && b.x0 - gap < a.x1 && a.y0 - gap < b.y1 &&
         b.y0 - gap < a.y1;
}

}  // namespace

std::vector<Material> default_materials() {
  return {{"concrete", 3.0}, {"glass", 1.0}, {"metal", 0.5}};
}

void validate(const Scene& s) {
  if (!(s.bounds.x_max > s.bounds.x_min) || !(s.bounds.y_max > s.bounds.y_min))
    throw std::invalid_argument("scene bounds are empty");
  for (const auto& m : s.materials) {
    if (!std::isfinite(m.reflection_loss_db) || m.reflection_loss_db < 0.0)
      throw std::invalid_argument("material '" + m.name + "' has invalid reflection loss");
  }
  if (s.ground_material < 0 ||
      (static_cast<size_t>(s.ground_material) >= s.materials.size() && !s.materials.empty()))
    throw std::invalid_argument("ground material index out of range");
  for (size_t b = 0; b < s.buildings.size(); ++b) {
    const auto& bld = s.buildings[b];
    const std::string tag = "building " + std::to_string(b);
    if (bld.footprint.size() < 3)
      throw std::invalid_argument(tag + ": footprint needs >= 3 vertices");
    if (!(bld.height > 0.0))
      throw std::invalid_argument(tag + ": height must be > 0");
    if (bld.material < 0 || static_cast<size_t>(bld.material) >= s.materials.size())
      throw std::invalid_argument(tag + ": material index out of range");
    if (!polygon_is_simple(bld.footprint))
      throw std::invalid_argument(tag + ": footprint is self-intersecting");
    for (const auto& v : bld.footprint) {
      if (v.x < s.bounds.x_min || v.x > s.bounds.x_max || v.y < s.bounds.y_min ||
          v.y > s.bounds.y_max)
        throw std::invalid_argument(tag + ": footprint outside scene bounds");
    }
  }
}

std::string scene_to_json(const Scene& s) {
  nlohmann::ordered_json j;
  j["bounds"] = {{"x_min", s.bounds.x_min},
                 {"x_max", s.bounds.x_max},
                 {"y_min", s.bounds.y_min},
                 {"y_max", s.bounds.y_max}};
  j["terrain_z"] = s.terrain_z;
  auto mats = nlohmann::ordered_json::array();
  for (const auto& m : s.materials)
    mats.push_back({{"name", m.name}, {"reflection_loss_db", m.reflection_loss_db}});
  j["materials"] = mats;
  if (!s.materials.empty()) j["ground_material"] = s.materials[s.ground_material].name;
  auto blds = nlohmann::ordered_json::array();
  for (const auto& b : s.buildings) {
    auto fp = nlohmann::ordered_json::array();
    for (const auto& v : b.footprint) fp.push_back({v.x, v.y});
    blds.push_back({{"footprint", fp},
                    {"height", b.height},
                    {"material", s.materials[b.material].name}});
  }
  j["buildings"] = blds;
  return j.dump(2) + "\n";
}

Scene scene_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("scene parse error: ") + e.what());
  }
  Scene s;
  try {
    const auto& b = j.at("bounds");
    s.bounds = {b.at("x_min"), b.at("x_max"), b.at("y_min"), b.at("y_max")};
    s.terrain_z = j.at("terrain_z");
    for (const auto& m : j.at("materials"))
      s.materials.push_back({m.at("name"), m.at("reflection_loss_db")});
    if (j.contains("ground_material"))
      s.ground_material = material_index(s, j.at("ground_material"));
    for (const auto& bj : j.at("buildings")) {
      Building bld;
      for (const auto& v : bj.at("footprint"))
        bld.footprint.push_back({v.at(0), v.at(1)});
      if (signed_area(bld.footprint) < 0.0)
        std::reverse(bld.footprint.begin(), bld.footprint.end());
      bld.height = bj.at("height");
      bld.material = material_index(s, bj.at("material"));
      s.buildings.push_back(std::move(bld));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("scene schema error: ") + e.what());
  }
  validate(s);
  return s;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scene file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return scene_from_json(ss.str());
}

void save_scene(const Scene& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write scene file: " + path);
  out << scene_to_json(s);
}

Scene generate_synthetic_scene(std::uint64_t seed, const SceneGenConfig& cfg) {
  if (!(cfg.size_m > 0.0)) throw std::invalid_argument("scene size must be positive");
  Scene s;
  s.bounds = {0.0, cfg.size_m, 0.0, cfg.size_m};
  s.terrain_z = 0.0;
  s.materials = default_materials();
  s.ground_material = 0;

  Rng rng(seed);
  std::vector<Rect> placed;
  const long max_attempts = 100L * std::max(cfg.building_count, 1);
  long attempts = 0;
  while (static_cast<int>(placed.size()) < cfg.building_count) {
    if (++attempts > max_attempts)
      throw std::runtime_error("scene generation failed: cannot place " +
                               std::to_string(cfg.building_count) +
                               " buildings without overlap");
    const double w = rng.uniform(cfg.min_side, cfg.max_side);
    const double d = rng.uniform(cfg.min_side, cfg.max_side);
    const double x0 = rng.uniform(cfg.margin, cfg.size_m - cfg.margin - w);
    const double y0 = rng.uniform(cfg.margin, cfg.size_m - cfg.margin - d);
    Rect r{x0, y0, x0 + w, y0 + d};
    bool ok = true;
    for (const auto& p : placed)
      if (rects_overlap(r, p, cfg.margin)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    placed.push_back(r);
    Building b;
    b.footprint = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};  // CCW
    b.height = rng.uniform(cfg.min_height, cfg.max_height);
    b.material = static_cast<int>(rng.next_below(s.materials.size()));
    s.buildings.push_back(std::move(b));
  }
  validate(s);
  return s;
}

bool point_in_polygon(const std::vector<Vec2>& poly, double x, double y) {
  const size_t n = poly.size();
  // boundary counts as outside
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double c = cross(q.x - p.x, q.y - p.y, x - p.x, y - p.y);
    if (c == 0.0 && std::min(p.x, q.x) <= x && x <= std::max(p.x, q.x) &&
        std::min(p.y, q.y) <= y && y <= std::max(p.y, q.y))
      return false;
  }
  bool inside = false;
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[j];
    if ((p.y > y) != (q.y > y) &&
        x < (q.x - p.x) * (y - p.y) / (q.y - p.y) + p.x)
      inside = !inside;
  }
  return inside;
}

bool segment_occluded(const Scene& s, const LocalPoint& a, const LocalPoint& b) {
  // terrain: any interior point strictly below the ground plane
  if (std::min(a.z, b.z) < s.terrain_z) return true;

  const double dx = b.x - a.x, dy = b.y - a.y, dz = b.z - a.z;
  for (const auto& bld : s.buildings) {
    const double z_lo = s.terrain_z, z_hi = s.terrain_z + bld.height;
    // clip the open parameter interval to the building's z slab
    double t0 = 0.0, t1 = 1.0;
    if (dz != 0.0) {
      double ta = (z_lo - a.z) / dz;
      double tb = (z_hi - a.z) / dz;
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
    } else if (a.z <= z_lo || a.z >= z_hi) {
      continue;
    }
    if (t1 - t0 <= 1e-12) continue;

    const auto& poly = bld.footprint;
    if (dx == 0.0 && dy == 0.0) {
      if (point_in_polygon(poly, a.x, a.y)) return true;
      continue;
    }
    // breakpoints where the 2D projection crosses a footprint edge
    std::vector<double> ts{t0, t1};
    const Vec2 p1{a.x, a.y}, p2{b.x, b.y};
    for (size_t i = 0; i < poly.size(); ++i)
      edge_crossings(p1, p2, poly[i], poly[(i + 1) % poly.size()], ts);
    std::sort(ts.begin(), ts.end());
    for (size_t i = 0; i + 1 < ts.size(); ++i) {
      if (ts[i] < t0 || ts[i + 1] > t1) continue;
      if (ts[i + 1] - ts[i] <= 1e-12) continue;
      const double tm = 0.5 * (ts[i] + ts[i + 1]);
      if (point_in_polygon(poly, a.x + tm * dx, a.y + tm * dy)) return true;
    }
  }
  return false;
}

std::vector<LocalPoint> sample_receiver_positions(const Scene& s, int count,
                                                  double height, std::uint64_t seed) {
  if (count <= 0) throw std::invalid_argument("receiver count must be positive");
  Rng rng(seed);
  std::vector<LocalPoint> out;
  out.reserve(count);
  const long max_attempts = 100L * count;
  long attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > max_attempts)
      throw std::runtime_error("receiver sampling failed: scene too dense");
    const double x = rng.uniform(s.bounds.x_min, s.bounds.x_max);
    const double y = rng.uniform(s.bounds.y_min, s.bounds.y_max);
    bool blocked = false;
    for (const auto& bld : s.buildings) {
      if (point_in_polygon(bld.footprint, x, y)) {
        blocked = true;
        break;
      }
    }
    if (blocked) continue;
    out.push_back({x, y, height});
  }
  return out;
}

}  // namespace chanpred::scene
