#include "core/predictor.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace chanpred::ml {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json j;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  j["data"] = m.data;
  return j;
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols)
    throw std::invalid_argument("model file: matrix shape mismatch");
  return m;
}

}  // namespace

const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Linear: return "lr";
    case ModelKind::Svr: return "svr";
    case ModelKind::Tree: return "dtr";
  }
  return "?";
}

const char* to_string(Target t) { return t == Target::Re ? "re" : "im"; }

TrainedPredictor TrainedPredictor::fit(ModelKind kind, Target target,
                                       const Matrix& x_raw, const std::vector<double>& y,
                                       const Hyper& hyper) {
  TrainedPredictor p;
  p.kind_ = kind;
  p.target_ = target;
  p.standardizer_ = Standardizer::fit(x_raw);
  const Matrix x = p.standardizer_.transform(x_raw);

  switch (kind) {
    case ModelKind::Linear:
      p.model_ = fit_linear(x, y);
      break;
    case ModelKind::Tree:
      p.model_ = fit_tree(x, y, hyper.tree);
      break;
    case ModelKind::Svr: {
      double mu = 0.0;
      for (double v : y) mu += v;
      mu /= y.size();
      double var = 0.0;
      for (double v : y) var += (v - mu) * (v - mu);
      var /= y.size();
      const double sigma = std::sqrt(var);
      p.y_mu_ = mu;
      p.y_sigma_ = sigma > 0.0 ? sigma : 1.0;
      std::vector<double> ys(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) ys[i] = (y[i] - p.y_mu_) / p.y_sigma_;
      p.model_ = fit_svr(x, ys, hyper.svr);
      break;
    }
  }
  return p;
}

std::vector<double> TrainedPredictor::predict(const Matrix& x_raw) const {
  const Matrix x = standardizer_.transform(x_raw);
  std::vector<double> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) {
    double v = 0.0;
    if (const auto* lm = std::get_if<LinearModel>(&model_))
      v = predict_linear(*lm, x.row(r), x.cols);
    else if (const auto* sm = std::get_if<SvrModel>(&model_))
      v = predict_svr(*sm, x.row(r), x.cols) * y_sigma_ + y_mu_;
    else
      v = predict_tree(std::get<TreeModel>(model_), x.row(r), x.cols);
    out[r] = v;
  }
  return out;
}

std::string TrainedPredictor::to_json() const {
  ordered_json j;
  j["type"] = to_string(kind_);
  j["target"] = to_string(target_);
  j["standardizer"] = {{"mu", standardizer_.mu()},
                       {"sigma", standardizer_.sigma()},
                       {"kept", standardizer_.kept()}};
  j["target_scale"] = {{"mu", y_mu_}, {"sigma", y_sigma_}};
  if (const auto* lm = std::get_if<LinearModel>(&model_)) {
    j["parameters"] = {{"weights", lm->weights},
                       {"bias", lm->bias},
                       {"rank_deficient", lm->rank_deficient}};
  } else if (const auto* sm = std::get_if<SvrModel>(&model_)) {
    j["parameters"] = {{"support_vectors", matrix_to_json(sm->support_vectors)},
                       {"dual_coeffs", sm->dual_coeffs},
                       {"bias", sm->bias}};
    j["hyper"] = {{"gamma", sm->gamma}, {"c", sm->c}, {"epsilon", sm->epsilon}};
  } else {
    const auto& tm = std::get<TreeModel>(model_);
    auto nodes = ordered_json::array();
    for (const auto& n : tm.nodes)
      nodes.push_back({{"split_feature", n.split_feature},
                       {"split_threshold", n.split_threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"value", n.value}});
    j["parameters"] = {{"nodes", nodes}};
    j["hyper"] = {{"max_depth", tm.hyper.max_depth},
                  {"min_samples_leaf", tm.hyper.min_samples_leaf}};
  }
  return j.dump(2) + "\n";
}

TrainedPredictor TrainedPredictor::from_json(const std::string& text) {
  json j = json::parse(text);
  TrainedPredictor p;
  const std::string type = j.at("type");
  const std::string target = j.at("target");
  p.target_ = target == "re" ? Target::Re : Target::Im;
  p.standardizer_ = Standardizer::from_parts(
      j.at("standardizer").at("mu").get<std::vector<double>>(),
      j.at("standardizer").at("sigma").get<std::vector<double>>(),
      j.at("standardizer").at("kept").get<std::vector<std::size_t>>());
  p.y_mu_ = j.at("target_scale").at("mu");
  p.y_sigma_ = j.at("target_scale").at("sigma");
  const auto& params = j.at("parameters");
  if (type == "lr") {
    p.kind_ = ModelKind::Linear;
    LinearModel lm;
    lm.weights = params.at("weights").get<std::vector<double>>();
    lm.bias = params.at("bias");
    lm.rank_deficient = params.at("rank_deficient");
    p.model_ = std::move(lm);
  } else if (type == "svr") {
    p.kind_ = ModelKind::Svr;
    SvrModel sm;
    sm.support_vectors = matrix_from_json(params.at("support_vectors"));
    sm.dual_coeffs = params.at("dual_coeffs").get<std::vector<double>>();
    sm.bias = params.at("bias");
    sm.gamma = j.at("hyper").at("gamma");
    sm.c = j.at("hyper").at("c");
    sm.epsilon = j.at("hyper").at("epsilon");
    p.model_ = std::move(sm);
  } else if (type == "dtr") {
    p.kind_ = ModelKind::Tree;
    TreeModel tm;
    for (const auto& nj : params.at("nodes"))
      tm.nodes.push_back({nj.at("split_feature"), nj.at("split_threshold"),
                          nj.at("left"), nj.at("right"), nj.at("value")});
    tm.hyper.max_depth = j.at("hyper").at("max_depth");
    tm.hyper.min_samples_leaf = j.at("hyper").at("min_samples_leaf");
    p.model_ = std::move(tm);
  } else {
    throw std::invalid_argument("model file: unknown type '" + type + "'");
  }
  return p;
}

void TrainedPredictor::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << to_json();
}

TrainedPredictor TrainedPredictor::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace chanpred::ml
