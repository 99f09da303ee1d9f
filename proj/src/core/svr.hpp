#pragma once

#include <vector>

#include "core/matrix.hpp"

namespace chanpred::ml {

struct SvrHyper {
  double c = 1.0;
  double epsilon = 0.1;  // tube half-width, in target units as given
  double gamma = 0.0;    // 0 means 1/n_features at fit time
};

struct SvrModel {
  Matrix support_vectors;           // rows of the training design matrix
  std::vector<double> dual_coeffs;  // alpha - alpha*, one per support vector
  double bias = 0.0;
  double gamma = 0.0;
  double c = 0.0;
  double epsilon = 0.0;
};

// epsilon-SVR with RBF kernel, solved by SMO over the maximal violating pair.
// Deterministic; throws std::runtime_error with the final KKT violation when
// the iteration cap is hit.
SvrModel fit_svr(const Matrix& x, const std::vector<double>& y, const SvrHyper& hyper);

double predict_svr(const SvrModel& m, const double* row, std::size_t n);

}  // namespace chanpred::ml
