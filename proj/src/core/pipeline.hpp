#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/eval.hpp"
#include "core/predictor.hpp"
#include "core/scene.hpp"

namespace chanpred::pipeline {

struct TrainOptions {
  ds::SplitSpec split;
  ml::Hyper hyper;
  std::vector<ml::ModelKind> models{ml::ModelKind::Linear, ml::ModelKind::Svr,
                                    ml::ModelKind::Tree};
};

struct TrainResult {
  std::vector<ml::TrainedPredictor> predictors;          // one per (model, target)
  std::vector<eval::ReportRow> train_metrics;
  std::vector<eval::ReportRow> validation_metrics;
};

ds::Dataset subset(const ds::Dataset& d, const std::vector<long>& indices);

// Fits every requested model for both targets on the train partition and
// reports train/validation metrics. Model files land in out_dir as
// model_<kind>_<target>.json plus train_metrics.json; pass an empty out_dir
// to skip writing.
TrainResult train_models(const ds::Dataset& d, const TrainOptions& opts,
                         const std::string& out_dir);

std::vector<ml::TrainedPredictor> load_models(const std::string& dir);

// Evaluates on the holdout partition of d under the same split and writes
// the report files.
eval::Report evaluate_models(const ds::Dataset& d,
                             const std::vector<ml::TrainedPredictor>& predictors,
                             const ds::SplitSpec& split, const std::string& out_dir);

struct PipelineConfig {
  scene::SceneGenConfig scene_cfg;
  rt::TraceConfig trace_cfg;
  channel::PruningConfig prune_cfg;
  TrainOptions train;
  geo::LocalPoint tx{150.0, 150.0, 16.0};
  int rx_count = 15000;
  double rx_height = 1.5;
  std::uint64_t seed = 0;
  int workers = 1;
};

// scene -> dataset -> train -> evaluate, all artifacts under out_dir.
eval::Report run_pipeline(const PipelineConfig& cfg, const std::string& out_dir);

}  // namespace chanpred::pipeline
