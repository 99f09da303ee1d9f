#pragma once

#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/predictor.hpp"

namespace chanpred::eval {

struct Metrics {
  double mae = 0.0;
  double rmse = 0.0;
  double r2 = 0.0;
  bool r2_defined = true;
  std::string r2_reason;  // set when r2_defined is false
  std::size_t n = 0;
};

struct EcdfPoint {
  double x = 0.0;  // |error|
  double f = 0.0;  // cumulative probability
};

using EcdfCurve = std::vector<EcdfPoint>;

// RMSE/MAE/R^2 with ybar taken over the evaluation set itself.
Metrics compute_metrics(const std::vector<double>& y, const std::vector<double>& y_hat);

// Sorted |e_i| with rank-based probabilities; ties share the highest rank.
EcdfCurve ecdf(const std::vector<double>& errors);

// Smallest x with F >= q.
double ecdf_quantile(const EcdfCurve& c, double q);

struct ReportRow {
  std::string model;   // lr | svr | dtr | baseline
  std::string target;  // re | im
  Metrics metrics;
  double mean_abs_error = 0.0;
};

struct Report {
  std::vector<ReportRow> rows;
  std::vector<std::pair<std::string, EcdfCurve>> curves;  // "<model>_<target>"
};

// Evaluates every predictor on the holdout and appends a mean-predictor
// baseline per target. Throws on an empty holdout.
Report compare_models(const std::vector<ml::TrainedPredictor>& predictors,
                      const ds::Dataset& holdout);

std::string report_to_json(const Report& r);
Report report_from_json(const std::string& text);

// report.json, report.csv, ecdf_<model>_<target>.csv, hist_<target>.csv
void write_report_files(const Report& r, const ds::Dataset& holdout,
                        const std::string& out_dir);

// Freedman-Diaconis histogram, as (bin_lo, bin_hi, count) rows.
struct HistBin {
  double lo = 0.0, hi = 0.0;
  long count = 0;
};
std::vector<HistBin> histogram_fd(std::vector<double> values);

ml::Matrix design_matrix(const ds::Dataset& d);
std::vector<double> targets(const ds::Dataset& d, ml::Target t);

}  // namespace chanpred::eval
