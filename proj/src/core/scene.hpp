#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/geo.hpp"

namespace chanpred::scene {

using geo::LocalPoint;

struct Material {
  std::string name;
  double reflection_loss_db = 0.0;  // amplitude loss per specular bounce
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Building {
  std::vector<Vec2> footprint;  // simple polygon, CCW
  double height = 0.0;
  int material = 0;  // index into Scene::materials
};

struct Bounds {
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
};

struct Scene {
  Bounds bounds;
  double terrain_z = 0.0;
  std::vector<Material> materials;
  std::vector<Building> buildings;
  int ground_material = 0;  // index into materials; bounce loss for ground hits
};

struct SceneGenConfig {
  double size_m = 300.0;  // square extent
  int building_count = 40;
  double min_height = 6.0;
  double max_height = 30.0;
  double min_side = 8.0;
  double max_side = 30.0;
  double margin = 5.0;  // clearance from scene edge and between buildings
};

// Default material table: constant amplitude loss per bounce stands in for
// Fresnel/roughness modeling.
std::vector<Material> default_materials();

void validate(const Scene& s);  // throws std::invalid_argument naming the offender

Scene load_scene(const std::string& path);
void save_scene(const Scene& s, const std::string& path);
std::string scene_to_json(const Scene& s);  // canonical key order
Scene scene_from_json(const std::string& text);

// Deterministic in seed; rectangular non-overlapping footprints. Throws
// std::runtime_error when the requested density cannot be placed.
Scene generate_synthetic_scene(std::uint64_t seed, const SceneGenConfig& cfg);

// True iff the open segment (a,b) passes through a building volume or below
// the terrain plane. Boundary contact does not count.
bool segment_occluded(const Scene& s, const LocalPoint& a, const LocalPoint& b);

// Strict interior point-in-polygon (boundary counts as outside).
bool point_in_polygon(const std::vector<Vec2>& poly, double x, double y);

// Uniform over bounds at fixed z = height; points inside a footprint are
// resampled. Deterministic in seed.
std::vector<LocalPoint> sample_receiver_positions(const Scene& s, int count,
                                                  double height, std::uint64_t seed);

}  // namespace chanpred::scene
