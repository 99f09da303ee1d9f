/* chanpred: site-specific wireless channel dataset generation and
 * regression benchmarking. C API over the C++ core; all handles are opaque
 * and must be released with the matching _free function. */
#ifndef CHANPRED_H
#define CHANPRED_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum chp_status {
  CHP_OK = 0,
  CHP_ERR_INVALID_ARGUMENT = 1,
  CHP_ERR_IO = 2,
  CHP_ERR_PARSE = 3,
  CHP_ERR_GENERATION = 4,
  CHP_ERR_TRAINING = 5,
  CHP_ERR_INTERNAL = 6
} chp_status;

/* Message for the most recent failure on this thread. */
const char* chp_last_error(void);

typedef struct chp_scene chp_scene;
typedef struct chp_dataset chp_dataset;

typedef struct chp_scene_gen_config {
  double size_m;         /* square extent, meters */
  int building_count;
  double min_height;
  double max_height;
} chp_scene_gen_config;

typedef struct chp_trace_config {
  int max_reflection_order;
  double carrier_frequency_hz;
  double tx_power_w;
} chp_trace_config;

typedef struct chp_prune_config {
  double delta_th_db;
  double epsilon_tau_s;
} chp_prune_config;

typedef struct chp_split_spec {
  long model_subset_size;
  double train_fraction;
  uint64_t seed;
} chp_split_spec;

typedef struct chp_hyper {
  double svr_c;
  double svr_epsilon;
  double svr_gamma;      /* <= 0: 1/n_features */
  int tree_max_depth;    /* <= 0: unlimited */
  int tree_min_samples_leaf;
} chp_hyper;

/* Table-defaults for the simulation configuration. */
void chp_default_scene_gen_config(chp_scene_gen_config* out);
void chp_default_trace_config(chp_trace_config* out);
void chp_default_prune_config(chp_prune_config* out);
void chp_default_split_spec(chp_split_spec* out);
void chp_default_hyper(chp_hyper* out);

/* ---- scene ---- */
chp_status chp_scene_generate(uint64_t seed, const chp_scene_gen_config* cfg,
                              chp_scene** out);
chp_status chp_scene_load(const char* path, chp_scene** out);
chp_status chp_scene_save(const chp_scene* s, const char* path);
int chp_scene_building_count(const chp_scene* s);
void chp_scene_bounds(const chp_scene* s, double* x_min, double* x_max,
                      double* y_min, double* y_max);
void chp_scene_free(chp_scene* s);

/* ---- single-link trace (debug) ----
 * Fills up to cap (delay_s, gain_abs, order) triples; returns the number of
 * paths found, or -1 on error. */
long chp_trace_link(const chp_scene* s, const double tx[3], const double rx[3],
                    const chp_trace_config* cfg, double* delays_s,
                    double* gain_abs, int* orders, long cap);

/* ---- dataset ---- */
chp_status chp_dataset_generate(const chp_scene* s, const double tx[3],
                                int rx_count, double rx_height,
                                const chp_trace_config* trace_cfg,
                                const chp_prune_config* prune_cfg, uint64_t seed,
                                int workers, chp_dataset** out);
chp_status chp_dataset_save(const chp_dataset* d, const char* csv_path);
chp_status chp_dataset_load(const char* csv_path, chp_dataset** out);
long chp_dataset_size(const chp_dataset* d);
double chp_dataset_valid_ratio(const chp_dataset* d);
/* Population mean/variance of each coefficient component. */
chp_status chp_dataset_stats(const chp_dataset* d, double* mean_re, double* var_re,
                             double* mean_im, double* var_im);
void chp_dataset_free(chp_dataset* d);

/* ---- training / evaluation ----
 * models: comma-separated subset of "lr,svr,dtr". Model JSON files and
 * train_metrics.json are written to out_dir. */
chp_status chp_train(const chp_dataset* d, const chp_split_spec* split,
                     const chp_hyper* hyper, const char* models,
                     const char* out_dir);

/* Evaluates model_*.json from models_dir on the holdout partition of d and
 * writes report.json/report.csv plus eCDF and histogram CSVs to out_dir. */
chp_status chp_evaluate(const chp_dataset* d, const char* models_dir,
                        const chp_split_spec* split, const char* out_dir);

/* ---- full pipeline: scene -> dataset -> train -> evaluate ---- */
chp_status chp_pipeline(uint64_t seed, const chp_scene_gen_config* scene_cfg,
                        const chp_trace_config* trace_cfg,
                        const chp_prune_config* prune_cfg,
                        const chp_split_spec* split, const chp_hyper* hyper,
                        const double tx[3], int rx_count, double rx_height,
                        int workers, const char* out_dir);

/* ---- coordinate conversion ---- */
chp_status chp_geodetic_to_utm(double lat_deg, double lon_deg, double* easting,
                               double* northing, int* zone, int* is_north);

#ifdef __cplusplus
}
#endif

#endif /* CHANPRED_H */
