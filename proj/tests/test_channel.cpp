#include <doctest.h>

#include <cmath>
#include <complex>

#include "core/channel.hpp"
#include "core/rng.hpp"

using namespace chanpred;
using channel::PruningConfig;
using rt::PropagationPath;

namespace {

constexpr double kPi = 3.14159265358979323846;

PropagationPath path(double gain_abs, double delay_s, int order = 0) {
  PropagationPath p;
  p.gain = {gain_abs, 0.0};
  p.delay_s = delay_s;
  p.order = order;
  return p;
}

}  // namespace

TEST_CASE("path powers square the gains") {
  const std::vector<PropagationPath> paths{path(1.0, 0), path(0.5, 0)};
  const auto p = channel::path_powers(paths);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 0.25);
  CHECK_THROWS_AS(channel::path_powers({}), std::domain_error);
}

TEST_CASE("power of the Friis example") {
  const auto p = channel::path_powers({path(3.408e-5, 0)});
  CHECK(p[0] == doctest::Approx(1.161e-9).epsilon(1e-3));
}

TEST_CASE("all-equal gains make every path the max") {
  const auto p = channel::path_powers({path(0.3, 0), path(0.3, 1), path(0.3, 2)});
  for (double v : p) CHECK(v == p[0]);
}

TEST_CASE("pruning keeps paths within the relative power threshold") {
  PruningConfig cfg;  // 30 dB
  // relative powers 1, 1e-2, 1e-4 -> deltas 0, 20, 40 dB
  const std::vector<PropagationPath> paths{path(1.0, 0), path(0.1, 1), path(0.01, 2)};
  const auto kept = channel::prune_paths(paths, cfg);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].delay_s == 0.0);
  CHECK(kept[1].delay_s == 1.0);
}

TEST_CASE("single path always survives pruning") {
  PruningConfig cfg;
  cfg.delta_th_db = 0.001;
  CHECK(channel::prune_paths({path(1e-9, 0)}, cfg).size() == 1);
}

TEST_CASE("zero threshold keeps only the max-power paths, boundary inclusive") {
  PruningConfig cfg;
  cfg.delta_th_db = 0.0;
  const auto kept = channel::prune_paths(
      {path(0.5, 0), path(1.0, 1), path(1.0, 2), path(0.999, 3)}, cfg);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].delay_s == 1.0);
  CHECK(kept[1].delay_s == 2.0);
}

TEST_CASE("pruning properties: idempotence, monotonicity, inclusive boundary") {
  Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<PropagationPath> paths;
    const int n = 1 + static_cast<int>(rng.next_below(10));
    for (int i = 0; i < n; ++i)
      paths.push_back(path(std::pow(10.0, rng.uniform(-8, -2)), rng.uniform(0, 1e-6)));
    PruningConfig cfg;
    cfg.delta_th_db = rng.uniform(0.0, 50.0);

    const auto kept = channel::prune_paths(paths, cfg);
    // exact retention law
    const auto powers = channel::path_powers(paths);
    const double pmax = *std::max_element(powers.begin(), powers.end());
    const double floor = pmax * std::pow(10.0, -cfg.delta_th_db / 10.0);
    size_t expect = 0;
    for (size_t i = 0; i < paths.size(); ++i)
      if (powers[i] >= floor) ++expect;
    CHECK(kept.size() == expect);
    CHECK_FALSE(kept.empty());  // argmax always retained

    // idempotence
    const auto again = channel::prune_paths(kept, cfg);
    CHECK(again.size() == kept.size());

    // monotonicity in the threshold
    PruningConfig wider = cfg;
    wider.delta_th_db = cfg.delta_th_db + rng.uniform(0.0, 20.0);
    CHECK(channel::prune_paths(paths, wider).size() >= kept.size());
  }
}

TEST_CASE("LOS set is an excess-delay window") {
  const geo::LocalPoint tx{0, 0, 16}, rx{100, 0, 1.5};
  const double d = std::sqrt(100.0 * 100.0 + 14.5 * 14.5);
  const double t_los = d / rt::kSpeedOfLight;
  PruningConfig cfg;  // eps_tau = 57.76 ns

  SUBCASE("order-0 path always kept") {
    const auto kept = channel::los_set({path(1e-5, t_los)}, tx, rx, cfg);
    CHECK(kept.size() == 1);
  }
  SUBCASE("20 m excess path length is excluded") {
    const double t_bounce = (d + 20.0) / rt::kSpeedOfLight;  // ~66.7 ns excess
    const auto kept =
        channel::los_set({path(1e-5, t_los), path(1e-6, t_bounce, 1)}, tx, rx, cfg);
    CHECK(kept.size() == 1);
  }
  SUBCASE("infinite window is the identity") {
    PruningConfig inf_cfg;
    inf_cfg.epsilon_tau_s = std::numeric_limits<double>::infinity();
    const auto kept = channel::los_set(
        {path(1e-5, t_los), path(1e-6, t_los + 1e-3, 2)}, tx, rx, inf_cfg);
    CHECK(kept.size() == 2);
  }
}

TEST_CASE("narrowband coefficient") {
  const double fc = 7e9;
  SUBCASE("whole-cycle phase is real") {
    const auto h = channel::narrowband_coefficient({path(1e-4, 1e-9)}, fc);
    REQUIRE(h.has_value());
    CHECK(h->real() == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(std::abs(h->imag()) < 1e-14);
  }
  SUBCASE("half-cycle offset cancels") {
    const auto h = channel::narrowband_coefficient(
        {path(1.0, 0.0), path(1.0, 1.0 / (2.0 * fc))}, fc);
    REQUIRE(h.has_value());
    CHECK(std::abs(*h) < 1e-12);
  }
  SUBCASE("free-space 100 m composition") {
    const double tau = 100.0 / rt::kSpeedOfLight;
    const auto h = channel::narrowband_coefficient({path(3.408e-5, tau)}, fc);
    REQUIRE(h.has_value());
    CHECK(std::abs(*h) == doctest::Approx(3.408e-5).epsilon(1e-12));
    const double want = -2.0 * M_PI * std::remainder(fc * tau, 1.0);
    CHECK(std::arg(*h) == doctest::Approx(std::remainder(want, 2.0 * M_PI)).epsilon(1e-9));
  }
  SUBCASE("empty input signals no valid path") {
    CHECK_FALSE(channel::narrowband_coefficient({}, fc).has_value());
  }
}

TEST_CASE("|h| obeys the triangle inequality over the kept set") {
  Rng rng(31);
  const double fc = 7e9;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PropagationPath> paths;
    const int n = 1 + static_cast<int>(rng.next_below(8));
    double sum_abs = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = std::pow(10.0, rng.uniform(-6, -3));
      paths.push_back(path(g, rng.uniform(0, 1e-6)));
      sum_abs += g;
    }
    const auto h = channel::narrowband_coefficient(paths, fc);
    REQUIRE(h.has_value());
    CHECK(std::abs(*h) <= sum_abs * (1.0 + 1e-12));
  }
}

TEST_CASE("single path: |h| = |alpha| and arg(h) = -2 pi f tau") {
  Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    const double g = std::pow(10.0, rng.uniform(-6, -3));
    const double tau = rng.uniform(0, 2e-6);
    const double fc = 7e9;
    const auto h = channel::narrowband_coefficient({path(g, tau)}, fc);
    REQUIRE(h.has_value());
    CHECK(std::abs(*h) == doctest::Approx(g).epsilon(1e-12));
    const double want = std::remainder(-fc * tau, 1.0) * 2.0 * kPi;
    CHECK(std::remainder(std::arg(*h) - want, 2.0 * kPi) ==
          doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("prune/los_set commute when the max-power path is in the window") {
  Rng rng(55);
  const geo::LocalPoint tx{0, 0, 16}, rx{50, 0, 1.5};
  const double t_los = std::sqrt(50.0 * 50.0 + 14.5 * 14.5) / rt::kSpeedOfLight;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PropagationPath> paths{path(1.0, t_los)};  // max power, in window
    const int n = static_cast<int>(rng.next_below(6));
    for (int i = 0; i < n; ++i)
      paths.push_back(
          path(rng.uniform(0.0, 0.9), t_los + rng.uniform(0.0, 120e-9), 1));
    PruningConfig cfg;
    const auto a = channel::los_set(channel::prune_paths(paths, cfg), tx, rx, cfg);
    auto pre = channel::los_set(paths, tx, rx, cfg);
    const auto b = channel::prune_paths(pre, cfg);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].delay_s == b[i].delay_s);
  }
}
