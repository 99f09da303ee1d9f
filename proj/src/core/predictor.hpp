#pragma once

#include <string>
#include <variant>
#include <vector>

#include "core/linear.hpp"
#include "core/standardize.hpp"
#include "core/svr.hpp"
#include "core/tree.hpp"

namespace chanpred::ml {

enum class ModelKind { Linear, Svr, Tree };
enum class Target { Re, Im };

const char* to_string(ModelKind k);
const char* to_string(Target t);

struct Hyper {
  SvrHyper svr;
  TreeHyper tree;
};

// One trained model bundled with the standardizer fit on its training rows.
// SVR additionally standardizes the target internally (raw h values are
// O(1e-4), which would swamp a fixed epsilon tube otherwise).
class TrainedPredictor {
 public:
  static TrainedPredictor fit(ModelKind kind, Target target, const Matrix& x_raw,
                              const std::vector<double>& y, const Hyper& hyper);

  std::vector<double> predict(const Matrix& x_raw) const;

  ModelKind kind() const { return kind_; }
  Target target() const { return target_; }
  const Standardizer& standardizer() const { return standardizer_; }

  std::string to_json() const;
  static TrainedPredictor from_json(const std::string& text);
  void save(const std::string& path) const;
  static TrainedPredictor load(const std::string& path);

 private:
  TrainedPredictor() : standardizer_(Standardizer::from_parts({}, {}, {})) {}

  ModelKind kind_ = ModelKind::Linear;
  Target target_ = Target::Re;
  Standardizer standardizer_;
  std::variant<LinearModel, SvrModel, TreeModel> model_;
  // SVR target scaling; identity for the other models
  double y_mu_ = 0.0;
  double y_sigma_ = 1.0;
};

}  // namespace chanpred::ml
