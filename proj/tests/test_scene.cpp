#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "core/rng.hpp"
#include "core/scene.hpp"

using namespace chanpred;
using scene::Scene;
using geo::LocalPoint;

namespace {

Scene free_space(double size = 300.0) {
  Scene s;
  s.bounds = {0.0, size, 0.0, size};
  s.materials = scene::default_materials();
  return s;
}

// axis-aligned box footprint
scene::Building box(double x0, double y0, double x1, double y1, double h, int mat = 0) {
  return {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, h, mat};
}

// oracle: segment vs axis-aligned box via slab clipping
bool segment_hits_box(const LocalPoint& a, const LocalPoint& b, double lo[3], double hi[3]) {
  const double p[3] = {a.x, a.y, a.z};
  const double d[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
  double t0 = 0.0, t1 = 1.0;
  for (int i = 0; i < 3; ++i) {
    if (d[i] == 0.0) {
      if (p[i] <= lo[i] || p[i] >= hi[i]) return false;
    } else {
      double ta = (lo[i] - p[i]) / d[i];
      double tb = (hi[i] - p[i]) / d[i];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
    }
  }
  return t1 - t0 > 1e-12;
}

}  // namespace

TEST_CASE("free-space scene is valid and unoccluded") {
  const Scene s = free_space();
  CHECK_NOTHROW(scene::validate(s));
  CHECK_FALSE(scene::segment_occluded(s, {0, 0, 10}, {300, 300, 10}));
}

TEST_CASE("self-intersecting footprint is rejected with the building named") {
  Scene s = free_space();
  s.buildings.push_back({{{0, 0}, {10, 10}, {10, 0}, {0, 10}}, 5.0, 0});  // bowtie
  try {
    scene::validate(s);
    FAIL("expected validation error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("building 0") != std::string::npos);
    CHECK(std::string(e.what()).find("self-intersecting") != std::string::npos);
  }
}

TEST_CASE("scene JSON round trip preserves building count") {
  Scene s = free_space();
  Rng rng(3);
  for (int i = 0; i < 40; ++i) {
    const double x = 10.0 + 6.5 * i, y = 20.0 + 5.0 * (i % 7);
    s.buildings.push_back(box(x, y, x + 4.0, y + 3.0, 6.0 + (i % 25), i % 3));
  }
  const std::string path = "scene_roundtrip_test.json";
  scene::save_scene(s, path);
  const Scene loaded = scene::load_scene(path);
  CHECK(loaded.buildings.size() == 40);
  CHECK(loaded.bounds.x_max == 300.0);
  // canonical serialization: save(load(x)) == save(x)
  CHECK(scene::scene_to_json(loaded) == scene::scene_to_json(s));
  std::remove(path.c_str());
}

TEST_CASE("parse error reports context") {
  CHECK_THROWS_AS(scene::scene_from_json("{not json"), std::invalid_argument);
  CHECK_THROWS_AS(scene::scene_from_json("{\"bounds\": {}}"), std::invalid_argument);
}

TEST_CASE("synthetic scene generation") {
  scene::SceneGenConfig cfg;
  SUBCASE("same seed gives byte-identical scenes") {
    const Scene a = scene::generate_synthetic_scene(7, cfg);
    const Scene b = scene::generate_synthetic_scene(7, cfg);
    CHECK(scene::scene_to_json(a) == scene::scene_to_json(b));
  }
  SUBCASE("zero buildings gives free space") {
    cfg.building_count = 0;
    CHECK(scene::generate_synthetic_scene(1, cfg).buildings.empty());
  }
  SUBCASE("buildings are inside bounds and pairwise disjoint") {
    const Scene s = scene::generate_synthetic_scene(42, cfg);
    REQUIRE(s.buildings.size() == 40);
    for (const auto& b : s.buildings) {
      CHECK(b.height >= cfg.min_height);
      CHECK(b.height <= cfg.max_height);
      for (const auto& v : b.footprint) {
        CHECK(v.x >= 0.0);
        CHECK(v.x <= 300.0);
        CHECK(v.y >= 0.0);
        CHECK(v.y <= 300.0);
      }
    }
    // exhaustive pairwise overlap check: no vertex of one footprint strictly
    // inside another, and no edge crossings
    for (size_t i = 0; i < s.buildings.size(); ++i)
      for (size_t j = 0; j < s.buildings.size(); ++j) {
        if (i == j) continue;
        for (const auto& v : s.buildings[i].footprint)
          CHECK_FALSE(scene::point_in_polygon(s.buildings[j].footprint, v.x, v.y));
      }
  }
  SUBCASE("infeasible density errors out") {
    cfg.building_count = 100000;
    CHECK_THROWS_AS(scene::generate_synthetic_scene(1, cfg), std::runtime_error);
  }
}

TEST_CASE("occlusion against a box matches the analytic slab oracle") {
  Scene s = free_space();
  s.buildings.push_back(box(145, 145, 155, 155, 10.0));
  double lo[3] = {145, 145, 0}, hi[3] = {155, 155, 10};

  SUBCASE("through the interior") {
    const LocalPoint a{100, 150, 5}, b{200, 150, 5};
    CHECK(scene::segment_occluded(s, a, b));
    CHECK(segment_hits_box(a, b, lo, hi));
  }
  SUBCASE("above the roof") {
    const LocalPoint a{100, 150, 12}, b{200, 150, 12};
    CHECK_FALSE(scene::segment_occluded(s, a, b));
    CHECK_FALSE(segment_hits_box(a, b, lo, hi));
  }
  SUBCASE("randomized agreement") {
    Rng rng(99);
    int hits = 0;
    for (int i = 0; i < 2000; ++i) {
      const LocalPoint a{rng.uniform(0, 300), rng.uniform(0, 300), rng.uniform(0, 20)};
      const LocalPoint b{rng.uniform(0, 300), rng.uniform(0, 300), rng.uniform(0, 20)};
      const bool got = scene::segment_occluded(s, a, b);
      CHECK(got == segment_hits_box(a, b, lo, hi));
      hits += got;
    }
    CHECK(hits > 0);  // the case split actually exercised both branches
  }
}

TEST_CASE("grazing a face exactly does not occlude") {
  Scene s = free_space();
  s.buildings.push_back(box(100, 100, 120, 120, 10.0));
  // runs exactly along the x=100 wall plane
  CHECK_FALSE(scene::segment_occluded(s, {100, 50, 5}, {100, 150, 5}));
  // touches the rooftop plane exactly
  CHECK_FALSE(scene::segment_occluded(s, {90, 110, 10}, {130, 110, 10}));
  // endpoint on a wall face, rest outside
  CHECK_FALSE(scene::segment_occluded(s, {100, 110, 5}, {50, 110, 5}));
}

TEST_CASE("occlusion is symmetric and monotone in the building set") {
  Scene s = free_space();
  s.buildings.push_back(box(140, 140, 160, 160, 25.0));
  Scene s2 = s;
  s2.buildings.push_back(box(200, 200, 220, 220, 25.0));
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const LocalPoint a{rng.uniform(0, 300), rng.uniform(0, 300), rng.uniform(0, 30)};
    const LocalPoint b{rng.uniform(0, 300), rng.uniform(0, 300), rng.uniform(0, 30)};
    const bool ab = scene::segment_occluded(s, a, b);
    CHECK(ab == scene::segment_occluded(s, b, a));
    if (ab) CHECK(scene::segment_occluded(s2, a, b));  // adding can only add occlusion
  }
}

TEST_CASE("terrain blocks segments dipping below ground") {
  const Scene s = free_space();
  CHECK(scene::segment_occluded(s, {0, 0, -1}, {10, 0, 5}));
  CHECK_FALSE(scene::segment_occluded(s, {0, 0, 0}, {10, 0, 5}));
}

TEST_CASE("receiver sampling") {
  scene::SceneGenConfig cfg;
  const Scene s = scene::generate_synthetic_scene(11, cfg);
  SUBCASE("count, height and reproducibility") {
    const auto a = scene::sample_receiver_positions(s, 1000, 1.5, 21);
    const auto b = scene::sample_receiver_positions(s, 1000, 1.5, 21);
    REQUIRE(a.size() == 1000);
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].z == 1.5);
      CHECK(a[i].x == b[i].x);
      CHECK(a[i].y == b[i].y);
    }
  }
  SUBCASE("no sample lands inside a footprint") {
    for (const auto& p : scene::sample_receiver_positions(s, 2000, 1.5, 33))
      for (const auto& bld : s.buildings)
        CHECK_FALSE(scene::point_in_polygon(bld.footprint, p.x, p.y));
  }
  SUBCASE("single point in an empty scene is reproducible and in bounds") {
    const Scene fs = free_space();
    const auto a = scene::sample_receiver_positions(fs, 1, 1.5, 4);
    const auto b = scene::sample_receiver_positions(fs, 1, 1.5, 4);
    REQUIRE(a.size() == 1);
    CHECK(a[0].x == b[0].x);
    CHECK(a[0].x >= 0.0);
    CHECK(a[0].x <= 300.0);
  }
}
