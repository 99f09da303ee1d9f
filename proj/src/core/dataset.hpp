#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "core/channel.hpp"
#include "core/scene.hpp"

namespace chanpred::ds {

using geo::LocalPoint;

struct ChannelSample {
  LocalPoint tx;
  LocalPoint rx;
  double h_re = 0.0;
  double h_im = 0.0;
};

struct DatasetMeta {
  long total_receivers = 0;
  long valid_count = 0;
  double valid_ratio = 0.0;
  std::uint64_t seed = 0;
  rt::TraceConfig trace_cfg;
  channel::PruningConfig prune_cfg;
  std::uint64_t scene_hash = 0;
};

struct Dataset {
  std::vector<ChannelSample> samples;
  DatasetMeta meta;
};

struct DatasetStats {
  double mean_re = 0.0, var_re = 0.0;  // population variance
  double mean_im = 0.0, var_im = 0.0;
};

struct SplitSpec {
  long model_subset_size = 1000;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct Split {
  std::vector<long> train, validation, holdout;  // row indices
};

// Trace + prune + LOS filter + coefficient synthesis for each sampled receiver.
// Receivers with no surviving path are counted but produce no row. Fan-out
// across `workers` threads; output order follows sampling order regardless of
// worker count.
Dataset generate_dataset(const scene::Scene& s, const LocalPoint& tx, int rx_count,
                         double rx_height, const rt::TraceConfig& trace_cfg,
                         const channel::PruningConfig& prune_cfg, std::uint64_t seed,
                         int workers = 1);

DatasetStats dataset_stats(const Dataset& d);  // throws if fewer than 2 rows

Split split(const Dataset& d, const SplitSpec& spec);

// CSV with fixed header tx_x,...,h_im; 17 significant digits; sidecar
// <path>.meta.json carries the generation metadata.
void write_csv(const Dataset& d, const std::string& path);
Dataset read_csv(const std::string& path);

}  // namespace chanpred::ds
