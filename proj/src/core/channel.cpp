#include "core/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chanpred::channel {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::vector<double> path_powers(const std::vector<PropagationPath>& paths) {
  if (paths.empty()) throw std::domain_error("path_powers: empty path list");
  std::vector<double> powers;
  powers.reserve(paths.size());
  for (const auto& p : paths) powers.push_back(std::norm(p.gain));
  return powers;
}

std::vector<PropagationPath> prune_paths(const std::vector<PropagationPath>& paths,
                                         const PruningConfig& cfg) {
  const auto powers = path_powers(paths);
  const double p_max = *std::max_element(powers.begin(), powers.end());
  const double floor = p_max * std::pow(10.0, -cfg.delta_th_db / 10.0);
  std::vector<PropagationPath> kept;
  for (size_t i = 0; i < paths.size(); ++i)
    if (powers[i] >= floor) kept.push_back(paths[i]);
  return kept;
}

std::vector<PropagationPath> los_set(const std::vector<PropagationPath>& paths,
                                     const LocalPoint& tx, const LocalPoint& rx,
                                     const PruningConfig& cfg) {
  const double d = std::sqrt((tx.x - rx.x) * (tx.x - rx.x) +
                             (tx.y - rx.y) * (tx.y - rx.y) +
                             (tx.z - rx.z) * (tx.z - rx.z));
  const double los_delay = d / rt::kSpeedOfLight;
  std::vector<PropagationPath> kept;
  for (const auto& p : paths)
    if (std::abs(p.delay_s - los_delay) <= cfg.epsilon_tau_s) kept.push_back(p);
  return kept;
}

std::optional<std::complex<double>> narrowband_coefficient(
    const std::vector<PropagationPath>& paths, double carrier_frequency_hz) {
  if (paths.empty()) return std::nullopt;
  std::complex<double> h{0.0, 0.0};
  for (const auto& p : paths) {
    // reduce f_c*tau modulo 1 before the trig call; tau spans thousands of
    // carrier cycles and the phase would otherwise lose precision
    const double cycles = std::remainder(carrier_frequency_hz * p.delay_s, 1.0);
    const double phase = -2.0 * kPi * cycles;
    h += p.gain * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return h;
}

}  // namespace chanpred::channel
