#include "core/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace chanpred::eval {

namespace {
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

Metrics compute_metrics(const std::vector<double>& y, const std::vector<double>& y_hat) {
  if (y.size() != y_hat.size()) throw std::domain_error("compute_metrics: length mismatch");
  if (y.empty()) throw std::domain_error("compute_metrics: empty input");
  const std::size_t n = y.size();
  double abs_sum = 0.0, sq_sum = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - y_hat[i];
    abs_sum += std::abs(e);
    sq_sum += e * e;
    ybar += y[i];
  }
  ybar /= n;
  double ss_tot = 0.0;
  for (double v : y) ss_tot += (v - ybar) * (v - ybar);

  Metrics m;
  m.n = n;
  m.mae = abs_sum / n;
  m.rmse = std::sqrt(sq_sum / n);
  if (ss_tot == 0.0) {
    m.r2 = std::numeric_limits<double>::quiet_NaN();
    m.r2_defined = false;
    m.r2_reason = "constant targets: total sum of squares is zero";
  } else {
    m.r2 = 1.0 - sq_sum / ss_tot;
  }
  return m;
}

EcdfCurve ecdf(const std::vector<double>& errors) {
  if (errors.empty()) throw std::domain_error("ecdf: empty input");
  std::vector<double> abs_e(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) abs_e[i] = std::abs(errors[i]);
  std::sort(abs_e.begin(), abs_e.end());
  const double n = static_cast<double>(abs_e.size());
  EcdfCurve c(abs_e.size());
  for (std::size_t i = 0; i < abs_e.size(); ++i)
    c[i] = {abs_e[i], static_cast<double>(i + 1) / n};
  // ties share the highest applicable probability
  for (std::size_t i = abs_e.size(); i-- > 1;)
    if (c[i - 1].x == c[i].x) c[i - 1].f = c[i].f;
  return c;
}

double ecdf_quantile(const EcdfCurve& c, double q) {
  for (const auto& p : c)
    if (p.f >= q) return p.x;
  return c.back().x;
}

ml::Matrix design_matrix(const ds::Dataset& d) {
  ml::Matrix x(d.samples.size(), 6);
  for (std::size_t r = 0; r < d.samples.size(); ++r) {
    const auto& s = d.samples[r];
    x(r, 0) = s.tx.x;
    x(r, 1) = s.tx.y;
    x(r, 2) = s.tx.z;
    x(r, 3) = s.rx.x;
    x(r, 4) = s.rx.y;
    x(r, 5) = s.rx.z;
  }
  return x;
}

std::vector<double> targets(const ds::Dataset& d, ml::Target t) {
  std::vector<double> y(d.samples.size());
  for (std::size_t i = 0; i < d.samples.size(); ++i)
    y[i] = t == ml::Target::Re ? d.samples[i].h_re : d.samples[i].h_im;
  return y;
}

Report compare_models(const std::vector<ml::TrainedPredictor>& predictors,
                      const ds::Dataset& holdout) {
  if (holdout.samples.empty()) throw std::domain_error("compare_models: empty holdout");
  const ml::Matrix x = design_matrix(holdout);
  Report rep;

  auto add_row = [&](const std::string& model, ml::Target t,
                     const std::vector<double>& y, const std::vector<double>& y_hat) {
    ReportRow row;
    row.model = model;
    row.target = ml::to_string(t);
    row.metrics = compute_metrics(y, y_hat);
    row.mean_abs_error = row.metrics.mae;
    std::vector<double> errs(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) errs[i] = y[i] - y_hat[i];
    rep.curves.emplace_back(model + "_" + ml::to_string(t), ecdf(errs));
    rep.rows.push_back(std::move(row));
  };

  for (const auto& p : predictors) {
    const auto y = targets(holdout, p.target());
    add_row(ml::to_string(p.kind()), p.target(), y, p.predict(x));
  }
  for (ml::Target t : {ml::Target::Re, ml::Target::Im}) {
    const auto y = targets(holdout, t);
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= y.size();
    add_row("baseline", t, y, std::vector<double>(y.size(), mean));
  }
  return rep;
}

std::string report_to_json(const Report& r) {
  nlohmann::ordered_json j;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json rj;
    rj["model"] = row.model;
    rj["target"] = row.target;
    rj["n"] = row.metrics.n;
    rj["mae"] = row.metrics.mae;
    rj["rmse"] = row.metrics.rmse;
    if (row.metrics.r2_defined)
      rj["r2"] = row.metrics.r2;
    else {
      rj["r2"] = nullptr;
      rj["r2_reason"] = row.metrics.r2_reason;
    }
    rj["mean_abs_error"] = row.mean_abs_error;
    rows.push_back(std::move(rj));
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Report r;
  for (const auto& rj : j.at("rows")) {
    ReportRow row;
    row.model = rj.at("model");
    row.target = rj.at("target");
    row.metrics.n = rj.at("n");
    row.metrics.mae = rj.at("mae");
    row.metrics.rmse = rj.at("rmse");
    if (rj.at("r2").is_null()) {
      row.metrics.r2_defined = false;
      row.metrics.r2 = std::numeric_limits<double>::quiet_NaN();
      row.metrics.r2_reason = rj.value("r2_reason", "");
    } else {
      row.metrics.r2 = rj.at("r2");
    }
    row.mean_abs_error = rj.at("mean_abs_error");
    r.rows.push_back(std::move(row));
  }
  return r;
}

std::vector<HistBin> histogram_fd(std::vector<double> values) {
  if (values.empty()) throw std::domain_error("histogram: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double q1 = values[n / 4];
  const double q3 = values[(3 * n) / 4];
  const double iqr = q3 - q1;
  const double lo = values.front(), hi = values.back();
  double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
  if (width <= 0.0) width = hi > lo ? (hi - lo) : 1.0;
  const long bins = std::max(1L, static_cast<long>(std::ceil((hi - lo) / width)));
  std::vector<HistBin> out(bins);
  for (long b = 0; b < bins; ++b) {
    out[b].lo = lo + b * width;
    out[b].hi = lo + (b + 1) * width;
  }
  for (double v : values) {
    long b = static_cast<long>((v - lo) / width);
    if (b >= bins) b = bins - 1;
    ++out[b].count;
  }
  return out;
}

void write_report_files(const Report& r, const ds::Dataset& holdout,
                        const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ofstream out(fs::path(out_dir) / "report.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report.json");
    out << report_to_json(r);
  }
  {
    std::ofstream out(fs::path(out_dir) / "report.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report.csv");
    out << "model,target,n,mae,rmse,r2,mean_abs_error\n";
    for (const auto& row : r.rows) {
      out << row.model << ',' << row.target << ',' << row.metrics.n << ','
          << fmt17(row.metrics.mae) << ',' << fmt17(row.metrics.rmse) << ','
          << (row.metrics.r2_defined ? fmt17(row.metrics.r2) : std::string("nan"))
          << ',' << fmt17(row.mean_abs_error) << "\n";
    }
  }
  for (const auto& [name, curve] : r.curves) {
    std::ofstream out(fs::path(out_dir) / ("ecdf_" + name + ".csv"), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write ecdf csv");
    out << "abs_error,cumulative_probability\n";
    for (const auto& p : curve) out << fmt17(p.x) << ',' << fmt17(p.f) << "\n";
  }
  for (ml::Target t : {ml::Target::Re, ml::Target::Im}) {
    const auto hist = histogram_fd(targets(holdout, t));
    std::ofstream out(fs::path(out_dir) / ("hist_" + std::string(ml::to_string(t)) + ".csv"),
                      std::ios::binary);
    if (!out) throw std::runtime_error("cannot write histogram csv");
    out << "bin_lo,bin_hi,count\n";
    for (const auto& b : hist)
      out << fmt17(b.lo) << ',' << fmt17(b.hi) << ',' << b.count << "\n";
  }
}

}  // namespace chanpred::eval
