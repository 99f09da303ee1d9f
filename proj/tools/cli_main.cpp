// chanpred command-line front end. Talks to the core exclusively through the
// C API in chanpred.h.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chanpred.h"

namespace {

using nlohmann::json;

struct Settings {
  std::uint64_t seed = 1;
  chp_scene_gen_config scene{};
  chp_trace_config trace{};
  chp_prune_config prune{};
  chp_split_spec split{};
  chp_hyper hyper{};
  double tx_x = 150.0, tx_y = 150.0, tx_z = 16.0;
  int rx_count = 15000;
  double rx_height = 1.5;
  int workers = 1;
  std::string models = "lr,svr,dtr";

  Settings() {
    chp_default_scene_gen_config(&scene);
    chp_default_trace_config(&trace);
    chp_default_prune_config(&prune);
    chp_default_split_spec(&split);
    chp_default_hyper(&hyper);
  }
};

// Applies a JSON config file on top of the built-in defaults. Flags parsed
// afterwards take precedence over both. Unknown keys are an error.
int apply_config(const std::string& path, Settings& s) {
  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "error: cannot open config file '%s'\n", path.c_str());
    return 2;
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: config '%s': %s\n", path.c_str(), e.what());
    return 2;
  }
  if (!j.is_object()) {
    std::fprintf(stderr, "error: config '%s': top level must be an object\n",
                 path.c_str());
    return 2;
  }
  try {
    for (const auto& [key, val] : j.items()) {
      if (key == "seed") s.seed = val.get<std::uint64_t>();
      else if (key == "size_m") s.scene.size_m = val.get<double>();
      else if (key == "building_count") s.scene.building_count = val.get<int>();
      else if (key == "min_height") s.scene.min_height = val.get<double>();
      else if (key == "max_height") s.scene.max_height = val.get<double>();
      else if (key == "max_reflection_order") s.trace.max_reflection_order = val.get<int>();
      else if (key == "carrier_frequency_hz") s.trace.carrier_frequency_hz = val.get<double>();
      else if (key == "tx_power_w") s.trace.tx_power_w = val.get<double>();
      else if (key == "delta_th_db") s.prune.delta_th_db = val.get<double>();
      else if (key == "epsilon_tau_s") s.prune.epsilon_tau_s = val.get<double>();
      else if (key == "model_subset_size") s.split.model_subset_size = val.get<long>();
      else if (key == "train_fraction") s.split.train_fraction = val.get<double>();
      else if (key == "tx_x") s.tx_x = val.get<double>();
      else if (key == "tx_y") s.tx_y = val.get<double>();
      else if (key == "tx_z") s.tx_z = val.get<double>();
      else if (key == "rx_count") s.rx_count = val.get<int>();
      else if (key == "rx_height") s.rx_height = val.get<double>();
      else if (key == "workers") s.workers = val.get<int>();
      else if (key == "models") s.models = val.get<std::string>();
      else if (key == "svr_c") s.hyper.svr_c = val.get<double>();
      else if (key == "svr_epsilon") s.hyper.svr_epsilon = val.get<double>();
      else if (key == "svr_gamma") s.hyper.svr_gamma = val.get<double>();
      else if (key == "tree_max_depth") s.hyper.tree_max_depth = val.get<int>();
      else if (key == "tree_min_samples_leaf") s.hyper.tree_min_samples_leaf = val.get<int>();
      else {
        std::fprintf(stderr, "error: config '%s': unknown key '%s'\n",
                     path.c_str(), key.c_str());
        return 2;
      }
    }
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: config '%s': %s\n", path.c_str(), e.what());
    return 2;
  }
  return 0;
}

int status_exit(chp_status st) {
  if (st == CHP_OK) return 0;
  std::fprintf(stderr, "error: %s\n", chp_last_error());
  return (st == CHP_ERR_INVALID_ARGUMENT || st == CHP_ERR_PARSE) ? 2 : 3;
}

void add_trace_flags(CLI::App* cmd, Settings& s) {
  cmd->add_option("--max-order", s.trace.max_reflection_order,
                  "Maximum reflection order (default 2)");
  cmd->add_option("--fc", s.trace.carrier_frequency_hz,
                  "Carrier frequency in Hz (default 7e9)");
  cmd->add_option("--tx-power", s.trace.tx_power_w,
                  "Transmit power in watts (default 1)");
  cmd->add_option("--delta-th", s.prune.delta_th_db,
                  "Relative power pruning threshold in dB (default 30)");
  cmd->add_option("--eps-tau", s.prune.epsilon_tau_s,
                  "Line-of-sight excess-delay window in seconds (default 57.76e-9)");
  cmd->add_option("--tx-x", s.tx_x, "Transmitter x in meters (default 150)");
  cmd->add_option("--tx-y", s.tx_y, "Transmitter y in meters (default 150)");
  cmd->add_option("--tx-z", s.tx_z, "Transmitter height in meters (default 16)");
  cmd->add_option("--receivers", s.rx_count,
                  "Number of receiver positions (default 15000)");
  cmd->add_option("--rx-height", s.rx_height,
                  "Receiver height in meters (default 1.5)");
}

void add_scene_flags(CLI::App* cmd, Settings& s) {
  cmd->add_option("--size", s.scene.size_m,
                  "Square scene extent in meters (default 300)");
  cmd->add_option("--buildings", s.scene.building_count,
                  "Number of buildings; 0 gives free space (default 40)");
  cmd->add_option("--min-height", s.scene.min_height,
                  "Minimum building height in meters (default 6)");
  cmd->add_option("--max-height", s.scene.max_height,
                  "Maximum building height in meters (default 30)");
}

void add_train_flags(CLI::App* cmd, Settings& s) {
  cmd->add_option("--models", s.models,
                  "Comma-separated subset of lr,svr,dtr (default all)");
  cmd->add_option("--subset", s.split.model_subset_size,
                  "Samples drawn for train+validation (default 1000)");
  cmd->add_option("--train-frac", s.split.train_fraction,
                  "Training fraction of the subset (default 0.8)");
  cmd->add_option("--svr-c", s.hyper.svr_c, "SVR box constraint C (default 1)");
  cmd->add_option("--svr-epsilon", s.hyper.svr_epsilon,
                  "SVR tube half-width (default 0.1)");
  cmd->add_option("--svr-gamma", s.hyper.svr_gamma,
                  "RBF kernel gamma; <=0 means 1/n_features (default auto)");
  cmd->add_option("--tree-max-depth", s.hyper.tree_max_depth,
                  "Decision-tree depth cap; <=0 unlimited (default 8)");
  cmd->add_option("--tree-min-leaf", s.hyper.tree_min_samples_leaf,
                  "Minimum samples per tree leaf (default 5)");
}

int cmd_scene(const Settings& s, const std::string& out) {
  chp_scene* sc = nullptr;
  chp_status st = chp_scene_generate(s.seed, &s.scene, &sc);
  if (st != CHP_OK) return status_exit(st);
  st = chp_scene_save(sc, out.c_str());
  if (st == CHP_OK) {
    double x0, x1, y0, y1;
    chp_scene_bounds(sc, &x0, &x1, &y0, &y1);
    std::printf("scene: %d buildings, bounds [%g, %g] x [%g, %g] -> %s\n",
                chp_scene_building_count(sc), x0, x1, y0, y1, out.c_str());
  }
  chp_scene_free(sc);
  return status_exit(st);
}

int cmd_generate(const Settings& s, const std::string& scene_path,
                 const std::string& out) {
  chp_scene* sc = nullptr;
  chp_status st = chp_scene_load(scene_path.c_str(), &sc);
  if (st != CHP_OK) return status_exit(st);
  const double tx[3] = {s.tx_x, s.tx_y, s.tx_z};
  chp_dataset* d = nullptr;
  st = chp_dataset_generate(sc, tx, s.rx_count, s.rx_height, &s.trace, &s.prune,
                            s.seed, s.workers, &d);
  chp_scene_free(sc);
  if (st != CHP_OK) return status_exit(st);
  st = chp_dataset_save(d, out.c_str());
  if (st == CHP_OK)
    std::printf("dataset: %ld rows, valid ratio %.4f -> %s\n",
                chp_dataset_size(d), chp_dataset_valid_ratio(d), out.c_str());
  chp_dataset_free(d);
  return status_exit(st);
}

int cmd_train(const Settings& s, const std::string& dataset_path,
              const std::string& out_dir) {
  chp_dataset* d = nullptr;
  chp_status st = chp_dataset_load(dataset_path.c_str(), &d);
  if (st != CHP_OK) return status_exit(st);
  chp_split_spec split = s.split;
  split.seed = s.seed;
  st = chp_train(d, &split, &s.hyper, s.models.c_str(), out_dir.c_str());
  chp_dataset_free(d);
  if (st == CHP_OK) std::printf("trained models written to %s\n", out_dir.c_str());
  return status_exit(st);
}

int cmd_evaluate(const Settings& s, const std::string& dataset_path,
                 const std::string& models_dir, const std::string& out_dir) {
  chp_dataset* d = nullptr;
  chp_status st = chp_dataset_load(dataset_path.c_str(), &d);
  if (st != CHP_OK) return status_exit(st);
  chp_split_spec split = s.split;
  split.seed = s.seed;
  st = chp_evaluate(d, models_dir.c_str(), &split, out_dir.c_str());
  chp_dataset_free(d);
  if (st == CHP_OK) std::printf("report written to %s\n", out_dir.c_str());
  return status_exit(st);
}

int cmd_pipeline(const Settings& s, const std::string& out_dir) {
  const double tx[3] = {s.tx_x, s.tx_y, s.tx_z};
  const chp_status st =
      chp_pipeline(s.seed, &s.scene, &s.trace, &s.prune, &s.split, &s.hyper, tx,
                   s.rx_count, s.rx_height, s.workers, out_dir.c_str());
  if (st == CHP_OK) std::printf("pipeline outputs written to %s\n", out_dir.c_str());
  return status_exit(st);
}

}  // namespace

int main(int argc, char** argv) {
  Settings s;

  // The config file sits between the built-in defaults and the flags, so it
  // has to be applied before CLI11 writes flag values. Scan for it up front.
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    std::string path;
    if (a == "--config" && i + 1 < argc) path = argv[i + 1];
    else if (a.rfind("--config=", 0) == 0) path = a.substr(9);
    if (!path.empty()) {
      const int rc = apply_config(path, s);
      if (rc != 0) return rc;
    }
  }

  CLI::App app{"site-specific channel dataset generation and model benchmarking"};
  app.require_subcommand(1);
  std::string config_path;

  std::string scene_out = "scene.json";
  auto* scene = app.add_subcommand("scene", "generate a synthetic scene");
  scene->add_option("--config", config_path, "JSON config file");
  scene->add_option("--seed", s.seed, "RNG seed (default 1)");
  scene->add_option("-o,--out", scene_out, "output scene file");
  add_scene_flags(scene, s);

  std::string gen_scene = "scene.json", gen_out = "dataset.csv";
  auto* gen = app.add_subcommand("generate", "trace a dataset over a scene");
  gen->add_option("--config", config_path, "JSON config file");
  gen->add_option("--seed", s.seed, "RNG seed (default 1)");
  gen->add_option("--scene", gen_scene, "input scene file")->required();
  gen->add_option("-o,--out", gen_out, "output dataset CSV");
  gen->add_option("--workers", s.workers, "worker threads; output independent of N");
  add_trace_flags(gen, s);

  std::string train_ds = "dataset.csv", train_out = "models";
  auto* train = app.add_subcommand("train", "fit predictors on a dataset");
  train->add_option("--config", config_path, "JSON config file");
  train->add_option("--seed", s.seed, "split seed (default 1)");
  train->add_option("--dataset", train_ds, "input dataset CSV")->required();
  train->add_option("-o,--out", train_out, "output directory for model files");
  add_train_flags(train, s);

  std::string eval_ds = "dataset.csv", eval_models = "models", eval_out = "report";
  auto* eval = app.add_subcommand("evaluate", "score trained models on the holdout");
  eval->add_option("--config", config_path, "JSON config file");
  eval->add_option("--seed", s.seed, "split seed; must match training (default 1)");
  eval->add_option("--dataset", eval_ds, "input dataset CSV")->required();
  eval->add_option("--models", eval_models, "directory of model JSON files");
  eval->add_option("-o,--out", eval_out, "output directory for reports");
  eval->add_option("--subset", s.split.model_subset_size,
                   "train+validation subset size used at training time");

  std::string pipe_out = "run";
  auto* pipe = app.add_subcommand("pipeline",
                                  "scene -> dataset -> train -> evaluate");
  pipe->add_option("--config", config_path, "JSON config file");
  pipe->add_option("--seed", s.seed,
                   "master seed; each stage draws a named sub-stream");
  pipe->add_option("-o,--out", pipe_out, "output directory");
  pipe->add_option("--workers", s.workers, "worker threads; output independent of N");
  add_scene_flags(pipe, s);
  add_trace_flags(pipe, s);
  add_train_flags(pipe, s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (scene->parsed()) return cmd_scene(s, scene_out);
  if (gen->parsed()) return cmd_generate(s, gen_scene, gen_out);
  if (train->parsed()) return cmd_train(s, train_ds, train_out);
  if (eval->parsed()) return cmd_evaluate(s, eval_ds, eval_models, eval_out);
  if (pipe->parsed()) return cmd_pipeline(s, pipe_out);
  return 2;
}
