#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "core/raytracer.hpp"
#include "core/rng.hpp"

using namespace chanpred;
using geo::LocalPoint;
using rt::TraceConfig;
using scene::Scene;

namespace {

constexpr double kPi = 3.14159265358979323846;

Scene free_space(double size = 1000.0) {
  Scene s;
  s.bounds = {0.0, size, 0.0, size};
  s.materials = scene::default_materials();
  return s;
}

double friis(double d, double fc, double p_w = 1.0) {
  return std::sqrt(p_w) * (rt::kSpeedOfLight / fc) / (4.0 * kPi * d);
}

}  // namespace

TEST_CASE("mirror_point") {
  SUBCASE("ground plane flips z") {
    const auto m = rt::mirror_point({3, 4, 7}, {{0, 0, 0}, {0, 0, 1}});
    CHECK(m.x == 3.0);
    CHECK(m.y == 4.0);
    CHECK(m.z == -7.0);
  }
  SUBCASE("plane x=5") {
    const auto m = rt::mirror_point({2, 0, 0}, {{5, 0, 0}, {1, 0, 0}});
    CHECK(m.x == doctest::Approx(8.0));
    CHECK(m.y == 0.0);
  }
  SUBCASE("involution") {
    const rt::Plane pl{{1, 2, 3}, {0.6, 0.8, 0.0}};
    const LocalPoint p{9, -4, 2};
    const auto m = rt::mirror_point(rt::mirror_point(p, pl), pl);
    CHECK(std::abs(m.x - p.x) < 1e-12);
    CHECK(std::abs(m.y - p.y) < 1e-12);
    CHECK(std::abs(m.z - p.z) < 1e-12);
  }
}

TEST_CASE("free-space LOS matches the closed-form oracle") {
  const Scene s = free_space();
  TraceConfig cfg;
  cfg.max_reflection_order = 0;  // no ground bounce
  const auto paths = rt::trace_paths(s, {100, 100, 10}, {200, 100, 10}, cfg);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].order == 0);
  CHECK(paths[0].delay_s == doctest::Approx(100.0 / rt::kSpeedOfLight).epsilon(1e-12));
  CHECK(std::abs(paths[0].gain) ==
        doctest::Approx(friis(100.0, cfg.carrier_frequency_hz)).epsilon(1e-12));
  // delay in ns, against the closed-form value
  CHECK(paths[0].delay_s * 1e9 == doctest::Approx(333.564).epsilon(1e-5));
  CHECK(std::abs(paths[0].gain) == doctest::Approx(3.408e-5).epsilon(1e-3));
}

TEST_CASE("tx power scales amplitude as sqrt(P)") {
  const Scene s = free_space();
  TraceConfig cfg;
  cfg.max_reflection_order = 0;
  cfg.tx_power_w = 4.0;
  const auto paths = rt::trace_paths(s, {0, 0, 10}, {50, 0, 10}, cfg);
  REQUIRE(paths.size() == 1);
  CHECK(std::abs(paths[0].gain) ==
        doctest::Approx(2.0 * friis(50.0, cfg.carrier_frequency_hz)).epsilon(1e-12));
}

TEST_CASE("ground reflection geometry matches the mirror-image oracle") {
  const Scene s = free_space();
  TraceConfig cfg;  // order 2 default; ground bounce is order 1
  const double d = 100.0;
  const auto paths = rt::trace_paths(s, {0, 0, 16}, {d, 0, 1.5}, cfg);
  REQUIRE(paths.size() == 2);  // LOS + ground bounce
  const auto& g = paths[1];
  CHECK(g.order == 1);
  REQUIRE(g.vertices.size() == 3);
  CHECK(g.vertices[1].x == doctest::Approx(d * 16.0 / 17.5).epsilon(1e-12));
  CHECK(g.vertices[1].z == doctest::Approx(0.0));
  const double len = std::sqrt(d * d + 17.5 * 17.5);
  CHECK(g.delay_s == doctest::Approx(len / rt::kSpeedOfLight).epsilon(1e-12));
  // one concrete bounce: 3 dB amplitude loss on top of Friis over the
  // unfolded length
  CHECK(std::abs(g.gain) ==
        doctest::Approx(friis(len, cfg.carrier_frequency_hz) *
                        std::pow(10.0, -3.0 / 20.0))
            .epsilon(1e-12));
}

TEST_CASE("single-wall reflection matches an analytically mirrored Tx") {
  Scene s = free_space(400.0);
  // one wall along x = 200 (building behind it)
  s.buildings.push_back({{{200, 50}, {210, 50}, {210, 350}, {200, 350}}, 30.0, 0});
  TraceConfig cfg;
  cfg.max_reflection_order = 1;
  const LocalPoint tx{100, 100, 10}, rx{100, 300, 10};
  const auto paths = rt::trace_paths(s, tx, rx, cfg);
  // LOS + ground + wall
  REQUIRE(paths.size() == 3);
  const auto wall = std::find_if(paths.begin(), paths.end(), [](const auto& p) {
    return p.order == 1 && p.vertices[1].z > 1.0;
  });
  REQUIRE(wall != paths.end());
  // image of tx across x=200 is (300, 100, 10); the bounce point is where
  // the rx -> image segment crosses the wall plane
  const LocalPoint image{300, 100, 10};
  const double t = (200.0 - rx.x) / (image.x - rx.x);
  CHECK(wall->vertices[1].x == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(wall->vertices[1].y == doctest::Approx(rx.y + t * (image.y - rx.y)).epsilon(1e-9));
  const double len = std::sqrt(200.0 * 200.0 + 200.0 * 200.0);  // |rx - image|
  CHECK(wall->delay_s == doctest::Approx(len / rt::kSpeedOfLight).epsilon(1e-12));
}

TEST_CASE("fully enclosed endpoints yield no paths") {
  Scene s = free_space(400.0);
  // closed shells around tx and rx (tall boxes, endpoints inside)
  s.buildings.push_back({{{90, 90}, {110, 90}, {110, 110}, {90, 110}}, 50.0, 0});
  s.buildings.push_back({{{290, 290}, {310, 290}, {310, 310}, {290, 310}}, 50.0, 0});
  TraceConfig cfg;
  const auto paths = rt::trace_paths(s, {100, 100, 10}, {300, 300, 10}, cfg);
  CHECK(paths.empty());
}

TEST_CASE("paths are sorted by delay and respect the LOS lower bound") {
  scene::SceneGenConfig gen;
  const Scene s = scene::generate_synthetic_scene(3, gen);
  TraceConfig cfg;
  const LocalPoint tx{150, 150, 16};
  Rng rng(17);
  for (int i = 0; i < 30; ++i) {
    const LocalPoint rx{rng.uniform(5, 295), rng.uniform(5, 295), 1.5};
    const auto paths = rt::trace_paths(s, tx, rx, cfg);
    const double dlos = std::sqrt((tx.x - rx.x) * (tx.x - rx.x) +
                                  (tx.y - rx.y) * (tx.y - rx.y) +
                                  (tx.z - rx.z) * (tx.z - rx.z));
    for (size_t k = 0; k < paths.size(); ++k) {
      if (k > 0) CHECK(paths[k].delay_s >= paths[k - 1].delay_s);
      CHECK(paths[k].delay_s >= dlos / rt::kSpeedOfLight - 1e-15);
      CHECK(paths[k].order == static_cast<int>(paths[k].vertices.size()) - 2);
      if (paths[k].order > 0)
        CHECK(paths[k].delay_s > dlos / rt::kSpeedOfLight);
      CHECK(std::abs(paths[k].gain) > 0.0);
    }
  }
}

TEST_CASE("reciprocity: tx<->rx give identical (|gain|, delay) multisets") {
  scene::SceneGenConfig gen;
  const Scene s = scene::generate_synthetic_scene(9, gen);
  TraceConfig cfg;
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const LocalPoint a{rng.uniform(5, 295), rng.uniform(5, 295), 16.0};
    const LocalPoint b{rng.uniform(5, 295), rng.uniform(5, 295), 1.5};
    auto fwd = rt::trace_paths(s, a, b, cfg);
    auto rev = rt::trace_paths(s, b, a, cfg);
    REQUIRE(fwd.size() == rev.size());
    auto key = [](const rt::PropagationPath& p) {
      return std::pair{p.delay_s, std::abs(p.gain)};
    };
    std::vector<std::pair<double, double>> kf, kr;
    for (const auto& p : fwd) kf.push_back(key(p));
    for (const auto& p : rev) kr.push_back(key(p));
    std::sort(kf.begin(), kf.end());
    std::sort(kr.begin(), kr.end());
    for (size_t k = 0; k < kf.size(); ++k) {
      CHECK(kf[k].first == doctest::Approx(kr[k].first).epsilon(1e-12));
      CHECK(kf[k].second == doctest::Approx(kr[k].second).epsilon(1e-12));
    }
  }
}

TEST_CASE("LOS gain scales exactly as 1/d") {
  const Scene s = free_space(10000.0);
  TraceConfig cfg;
  cfg.max_reflection_order = 0;
  double prev = 0.0;
  for (double d : {50.0, 100.0, 200.0, 400.0}) {
    const auto paths = rt::trace_paths(s, {0, 0, 10}, {d, 0, 10}, cfg);
    REQUIRE(paths.size() == 1);
    const double g = std::abs(paths[0].gain);
    if (prev > 0.0) CHECK(g == doctest::Approx(prev / 2.0).epsilon(1e-12));
    prev = g;
  }
}

TEST_CASE("each bounce strictly reduces amplitude") {
  scene::SceneGenConfig gen;
  const Scene s = scene::generate_synthetic_scene(13, gen);
  TraceConfig cfg;
  const auto paths = rt::trace_paths(s, {150, 150, 16}, {60, 60, 1.5}, cfg);
  for (const auto& p : paths) {
    if (p.order == 0) continue;
    // amplitude must be below the pure-Friis value for the same length
    const double d = p.delay_s * rt::kSpeedOfLight;
    CHECK(std::abs(p.gain) < friis(d, cfg.carrier_frequency_hz));
  }
}

TEST_CASE("identical inputs produce identical outputs") {
  scene::SceneGenConfig gen;
  const Scene s = scene::generate_synthetic_scene(4, gen);
  TraceConfig cfg;
  const auto a = rt::trace_paths(s, {150, 150, 16}, {30, 250, 1.5}, cfg);
  const auto b = rt::trace_paths(s, {150, 150, 16}, {30, 250, 1.5}, cfg);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].delay_s == b[i].delay_s);
    CHECK(a[i].gain == b[i].gain);
  }
}

TEST_CASE("coincident endpoints are rejected") {
  const Scene s = free_space();
  CHECK_THROWS_AS(rt::trace_paths(s, {1, 1, 1}, {1, 1, 1}, {}), std::invalid_argument);
}
