#pragma once

#include <complex>
#include <vector>

#include "core/scene.hpp"

namespace chanpred::rt {

using geo::LocalPoint;
using scene::Scene;

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct PropagationPath {
  std::complex<double> gain;          // real-positive; carrier phase applied downstream
  double delay_s = 0.0;               // total length / c
  int order = 0;                      // reflection count
  std::vector<LocalPoint> vertices;   // Tx, bounce points..., Rx
};

struct TraceConfig {
  int max_reflection_order = 2;
  double carrier_frequency_hz = 7.0e9;
  double tx_power_w = 1.0;
};

struct Plane {
  LocalPoint point;   // any point on the plane
  LocalPoint normal;  // unit, outward
};

LocalPoint mirror_point(const LocalPoint& p, const Plane& plane);

// LOS plus image-method specular paths over exterior building walls and the
// ground plane, up to max_reflection_order bounces. Sorted by delay; pure
// function of its arguments.
std::vector<PropagationPath> trace_paths(const Scene& s, const LocalPoint& tx,
                                         const LocalPoint& rx, const TraceConfig& cfg);

}  // namespace chanpred::rt
