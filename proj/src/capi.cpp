#include "chanpred.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "core/pipeline.hpp"
#include "core/rng.hpp"

using namespace chanpred;

struct chp_scene {
  scene::Scene impl;
};

struct chp_dataset {
  ds::Dataset impl;
};

namespace {

thread_local std::string g_last_error;

chp_status fail(chp_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// invalid_argument/domain_error map to INVALID_ARGUMENT, everything else to
// the caller-supplied fallback
template <typename Fn>
chp_status guarded(chp_status fallback, Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(CHP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(CHP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(fallback, e.what());
  } catch (...) {
    return fail(CHP_ERR_INTERNAL, "unknown error");
  }
}

scene::SceneGenConfig to_core(const chp_scene_gen_config& c) {
  scene::SceneGenConfig out;
  out.size_m = c.size_m;
  out.building_count = c.building_count;
  out.min_height = c.min_height;
  out.max_height = c.max_height;
  return out;
}

rt::TraceConfig to_core(const chp_trace_config& c) {
  return {c.max_reflection_order, c.carrier_frequency_hz, c.tx_power_w};
}

channel::PruningConfig to_core(const chp_prune_config& c) {
  return {c.delta_th_db, c.epsilon_tau_s};
}

ds::SplitSpec to_core(const chp_split_spec& c) {
  return {c.model_subset_size, c.train_fraction, c.seed};
}

ml::Hyper to_core(const chp_hyper& c) {
  ml::Hyper h;
  h.svr = {c.svr_c, c.svr_epsilon, c.svr_gamma > 0.0 ? c.svr_gamma : 0.0};
  h.tree = {c.tree_max_depth, c.tree_min_samples_leaf};
  return h;
}

std::vector<ml::ModelKind> parse_models(const char* models) {
  std::vector<ml::ModelKind> out;
  std::stringstream ss(models ? models : "lr,svr,dtr");
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "lr")
      out.push_back(ml::ModelKind::Linear);
    else if (tok == "svr")
      out.push_back(ml::ModelKind::Svr);
    else if (tok == "dtr")
      out.push_back(ml::ModelKind::Tree);
    else if (!tok.empty())
      throw std::invalid_argument("unknown model '" + tok + "' (expected lr,svr,dtr)");
  }
  if (out.empty()) throw std::invalid_argument("no models selected");
  return out;
}

}  // namespace

extern "C" {

const char* chp_last_error(void) { return g_last_error.c_str(); }

void chp_default_scene_gen_config(chp_scene_gen_config* out) {
  const scene::SceneGenConfig d;
  *out = {d.size_m, d.building_count, d.min_height, d.max_height};
}

void chp_default_trace_config(chp_trace_config* out) {
  const rt::TraceConfig d;
  *out = {d.max_reflection_order, d.carrier_frequency_hz, d.tx_power_w};
}

void chp_default_prune_config(chp_prune_config* out) {
  const channel::PruningConfig d;
  *out = {d.delta_th_db, d.epsilon_tau_s};
}

void chp_default_split_spec(chp_split_spec* out) {
  const ds::SplitSpec d;
  *out = {d.model_subset_size, d.train_fraction, d.seed};
}

void chp_default_hyper(chp_hyper* out) {
  const ml::Hyper d;
  *out = {d.svr.c, d.svr.epsilon, d.svr.gamma, d.tree.max_depth,
          d.tree.min_samples_leaf};
}

chp_status chp_scene_generate(uint64_t seed, const chp_scene_gen_config* cfg,
                              chp_scene** out) {
  if (!cfg || !out) return fail(CHP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(CHP_ERR_GENERATION, [&] {
    *out = new chp_scene{scene::generate_synthetic_scene(seed, to_core(*cfg))};
    return CHP_OK;
  });
}

chp_status chp_scene_load(const char* path, chp_scene** out) {
  if (!path || !out) return fail(CHP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(CHP_ERR_PARSE, [&] {
    *out = new chp_scene{scene::load_scene(path)};
    return CHP_OK;
  });
}

chp_status chp_scene_save(const chp_scene* s, const char* path) {
  if (!s || !path) return fail(CHP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(CHP_ERR_IO, [&] {
    scene::save_scene(s->impl, path);
    return CHP_OK;
  });
}

int chp_scene_building_count(const chp_scene* s) {
  return s ? static_cast<int>(s->impl.buildings.size()) : -1;
}

void chp_scene_bounds(const chp_scene* s, double* x_min, double* x_max,
                      double* y_min, double* y_max) {
  if (!s) return;
  if (x_min) *x_min = s->impl.bounds.x_min;
  if (x_max) *x_max = s->impl.bounds.x_max;
  if (y_min) *y_min = s->impl.bounds.y_min;
  if (y_max) *y_max = s->impl.bounds.y_max;
}

void chp_scene_free(chp_scene* s) { delete s; }

long chp_trace_link(const chp_scene* s, const double tx[3], const double rx[3],
                    const chp_trace_config* cfg, double* delays_s,
                    double* gain_abs, int* orders, long cap) {
  if (!s || !tx || !rx || !cfg) {
    fail(CHP_ERR_INVALID_ARGUMENT, "null argument");
    return -1;
  }
  try {
    const auto paths = rt::trace_paths(s->impl, {tx[0], tx[1], tx[2]},
                                       {rx[0], rx[1], rx[2]}, to_core(*cfg));
    const long n = static_cast<long>(paths.size());
    for (long i = 0; i < std::min(n, cap); ++i) {
      if (delays_s) delays_s[i] = paths[i].delay_s;
      if (gain_abs) gain_abs[i] = std::abs(paths[i].gain);
      if (orders) orders[i] = paths[i].order;
    }
    return n;
  } catch (const std::exception& e) {
    fail(CHP_ERR_INVALID_ARGUMENT, e.what());
    return -1;
  }
}

chp_status chp_dataset_generate(const chp_scene* s, const double tx[3],
                                int rx_count, double rx_height,
                                const chp_trace_config* trace_cfg,
                                const chp_prune_config* prune_cfg, uint64_t seed,
                                int workers, chp_dataset** out) {
  if (!s || !tx || !trace_cfg || !prune_cfg || !out)
    return fail(CHP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(CHP_ERR_GENERATION, [&] {
    *out = new chp_dataset{ds::generate_dataset(
        s->impl, {tx[0], tx[1], tx[2]}, rx_count, rx_height, to_core(*trace_cfg),
        to_core(*prune_cfg), seed, workers)};
    return CHP_OK;
  });
}

chp_status chp_dataset_save(const chp_dataset* d, const char* csv_path) {
  if (!d || !csv_path) return fail(CHP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(CHP_ERR_IO, [&] {
    ds::write_csv(d->impl, csv_path);
    return CHP_OK;
  });
}

chp_status chp_dataset_load(const char* csv_path, chp_dataset** out) {
  if (!csv_path || !out) return fail(CHP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(CHP_ERR_PARSE, [&] {
    *out = new chp_dataset{ds::read_csv(csv_path)};
    return CHP_OK;
  });
}

long chp_dataset_size(const chp_dataset* d) {
  return d ? static_cast<long>(d->impl.samples.size()) : -1;
}

double chp_dataset_valid_ratio(const chp_dataset* d) {
  return d ? d->impl.meta.valid_ratio : -1.0;
}

chp_status chp_dataset_stats(const chp_dataset* d, double* mean_re, double* var_re,
                             double* mean_im, double* var_im) {
  if (!d) return fail(CHP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(CHP_ERR_INVALID_ARGUMENT, [&] {
    const auto st = ds::dataset_stats(d->impl);
    if (mean_re) *mean_re = st.mean_re;
    if (var_re) *var_re = st.var_re;
    if (mean_im) *mean_im = st.mean_im;
    if (var_im) *var_im = st.var_im;
    return CHP_OK;
  });
}

void chp_dataset_free(chp_dataset* d) { delete d; }

chp_status chp_train(const chp_dataset* d, const chp_split_spec* split,
                     const chp_hyper* hyper, const char* models,
                     const char* out_dir) {
  if (!d || !split || !hyper || !out_dir)
    return fail(CHP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(CHP_ERR_TRAINING, [&] {
    pipeline::TrainOptions opts;
    opts.split = to_core(*split);
    opts.hyper = to_core(*hyper);
    opts.models = parse_models(models);
    pipeline::train_models(d->impl, opts, out_dir);
    return CHP_OK;
  });
}

chp_status chp_evaluate(const chp_dataset* d, const char* models_dir,
                        const chp_split_spec* split, const char* out_dir) {
  if (!d || !models_dir || !split || !out_dir)
    return fail(CHP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(CHP_ERR_IO, [&] {
    const auto predictors = pipeline::load_models(models_dir);
    pipeline::evaluate_models(d->impl, predictors, to_core(*split), out_dir);
    return CHP_OK;
  });
}

chp_status chp_pipeline(uint64_t seed, const chp_scene_gen_config* scene_cfg,
                        const chp_trace_config* trace_cfg,
                        const chp_prune_config* prune_cfg,
                        const chp_split_spec* split, const chp_hyper* hyper,
                        const double tx[3], int rx_count, double rx_height,
                        int workers, const char* out_dir) {
  if (!scene_cfg || !trace_cfg || !prune_cfg || !split || !hyper || !tx || !out_dir)
    return fail(CHP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(CHP_ERR_GENERATION, [&] {
    pipeline::PipelineConfig cfg;
    cfg.scene_cfg = to_core(*scene_cfg);
    cfg.trace_cfg = to_core(*trace_cfg);
    cfg.prune_cfg = to_core(*prune_cfg);
    cfg.train.split = to_core(*split);
    cfg.train.hyper = to_core(*hyper);
    cfg.tx = {tx[0], tx[1], tx[2]};
    cfg.rx_count = rx_count;
    cfg.rx_height = rx_height;
    cfg.seed = seed;
    cfg.workers = workers;
    pipeline::run_pipeline(cfg, out_dir);
    return CHP_OK;
  });
}

chp_status chp_geodetic_to_utm(double lat_deg, double lon_deg, double* easting,
                               double* northing, int* zone, int* is_north) {
  return guarded(CHP_ERR_INVALID_ARGUMENT, [&] {
    const auto u = geo::geodetic_to_utm({lat_deg, lon_deg});
    if (easting) *easting = u.easting;
    if (northing) *northing = u.northing;
    if (zone) *zone = u.zone;
    if (is_north) *is_north = u.hemisphere == geo::Hemisphere::North ? 1 : 0;
    return CHP_OK;
  });
}

}  // extern "C"
