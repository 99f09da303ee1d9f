#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "core/raytracer.hpp"

namespace chanpred::channel {

using rt::PropagationPath;
using geo::LocalPoint;

struct PruningConfig {
  double delta_th_db = 30.0;      // relative power threshold
  double epsilon_tau_s = 57.76e-9;  // excess-delay window
};

// P_i = |gain_i|^2. Throws on empty input.
std::vector<double> path_powers(const std::vector<PropagationPath>& paths);

// Keep paths with P_i >= P_max * 10^(-delta_th/10); inclusive boundary, order
// preserved. Throws on empty input.
std::vector<PropagationPath> prune_paths(const std::vector<PropagationPath>& paths,
                                         const PruningConfig& cfg);

// Excess-delay window around the straight-line Tx-Rx delay; may return empty.
std::vector<PropagationPath> los_set(const std::vector<PropagationPath>& paths,
                                     const LocalPoint& tx, const LocalPoint& rx,
                                     const PruningConfig& cfg);

// h = sum alpha_i * e^(-j 2 pi f_c tau_i); nullopt when no path survives.
std::optional<std::complex<double>> narrowband_coefficient(
    const std::vector<PropagationPath>& paths, double carrier_frequency_hz);

}  // namespace chanpred::channel
