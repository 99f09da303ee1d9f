#include "core/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "core/rng.hpp"

namespace chanpred::pipeline {

namespace fs = std::filesystem;

ds::Dataset subset(const ds::Dataset& d, const std::vector<long>& indices) {
  ds::Dataset out;
  out.meta = d.meta;
  out.samples.reserve(indices.size());
  for (long i : indices) out.samples.push_back(d.samples.at(static_cast<size_t>(i)));
  out.meta.valid_count = static_cast<long>(out.samples.size());
  out.meta.total_receivers = out.meta.valid_count;
  out.meta.valid_ratio = out.samples.empty() ? 0.0 : 1.0;
  return out;
}

TrainResult train_models(const ds::Dataset& d, const TrainOptions& opts,
                         const std::string& out_dir) {
  const ds::Split sp = ds::split(d, opts.split);
  const ds::Dataset train = subset(d, sp.train);
  const ds::Dataset val = subset(d, sp.validation);
  const ml::Matrix x_train = eval::design_matrix(train);
  const ml::Matrix x_val = eval::design_matrix(val);

  TrainResult result;
  for (ml::ModelKind kind : opts.models) {
    for (ml::Target target : {ml::Target::Re, ml::Target::Im}) {
      const auto y_train = eval::targets(train, target);
      auto p = ml::TrainedPredictor::fit(kind, target, x_train, y_train, opts.hyper);

      eval::ReportRow tr;
      tr.model = ml::to_string(kind);
      tr.target = ml::to_string(target);
      tr.metrics = eval::compute_metrics(y_train, p.predict(x_train));
      tr.mean_abs_error = tr.metrics.mae;
      result.train_metrics.push_back(tr);

      eval::ReportRow vr = tr;
      vr.metrics = eval::compute_metrics(eval::targets(val, target), p.predict(x_val));
      vr.mean_abs_error = vr.metrics.mae;
      result.validation_metrics.push_back(vr);

      result.predictors.push_back(std::move(p));
    }
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    for (const auto& p : result.predictors) {
      const std::string name = std::string("model_") + ml::to_string(p.kind()) + "_" +
                               ml::to_string(p.target()) + ".json";
      p.save((fs::path(out_dir) / name).string());
    }
    nlohmann::ordered_json j;
    auto rows_of = [](const std::vector<eval::ReportRow>& rows) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& r : rows)
        arr.push_back({{"model", r.model},
                       {"target", r.target},
                       {"mae", r.metrics.mae},
                       {"rmse", r.metrics.rmse},
                       {"r2", r.metrics.r2_defined ? nlohmann::ordered_json(r.metrics.r2)
                                                   : nlohmann::ordered_json(nullptr)}});
      return arr;
    };
    j["train"] = rows_of(result.train_metrics);
    j["validation"] = rows_of(result.validation_metrics);
    std::ofstream out(fs::path(out_dir) / "train_metrics.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write train_metrics.json");
    out << j.dump(2) << "\n";
  }
  return result;
}

std::vector<ml::TrainedPredictor> load_models(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("model_", 0) == 0 && e.path().extension() == ".json")
      files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no model_*.json files in " + dir);
  std::vector<ml::TrainedPredictor> out;
  for (const auto& f : files) out.push_back(ml::TrainedPredictor::load(f));
  return out;
}

eval::Report evaluate_models(const ds::Dataset& d,
                             const std::vector<ml::TrainedPredictor>& predictors,
                             const ds::SplitSpec& split_spec, const std::string& out_dir) {
  const ds::Split sp = ds::split(d, split_spec);
  const ds::Dataset holdout = subset(d, sp.holdout);
  eval::Report rep = eval::compare_models(predictors, holdout);
  if (!out_dir.empty()) eval::write_report_files(rep, holdout, out_dir);
  return rep;
}

namespace {

geo::LocalPoint place_tx(const scene::Scene& s, const geo::LocalPoint& want,
                         std::uint64_t seed) {
  auto blocked = [&](double x, double y, double z) {
    for (const auto& b : s.buildings)
      if (z < s.terrain_z + b.height && scene::point_in_polygon(b.footprint, x, y))
        return true;
    return false;
  };
  if (!blocked(want.x, want.y, want.z)) return want;
  Rng rng(seed);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform(s.bounds.x_min, s.bounds.x_max);
    const double y = rng.uniform(s.bounds.y_min, s.bounds.y_max);
    if (!blocked(x, y, want.z)) return {x, y, want.z};
  }
  throw std::runtime_error("cannot place transmitter outside building volumes");
}

}  // namespace

eval::Report run_pipeline(const PipelineConfig& cfg, const std::string& out_dir) {
  fs::create_directories(out_dir);

  const scene::Scene scn =
      scene::generate_synthetic_scene(substream(cfg.seed, "scene"), cfg.scene_cfg);
  scene::save_scene(scn, (fs::path(out_dir) / "scene.json").string());

  const geo::LocalPoint tx = place_tx(scn, cfg.tx, substream(cfg.seed, "tx"));
  ds::Dataset data =
      ds::generate_dataset(scn, tx, cfg.rx_count, cfg.rx_height, cfg.trace_cfg,
                       cfg.prune_cfg, substream(cfg.seed, "receivers"), cfg.workers);
  ds::write_csv(data, (fs::path(out_dir) / "dataset.csv").string());

  TrainOptions topts = cfg.train;
  topts.split.seed = substream(cfg.seed, "split");
  const TrainResult tr = train_models(data, topts, out_dir);
  return evaluate_models(data, tr.predictors, topts.split, out_dir);
}

}  // namespace chanpred::pipeline
