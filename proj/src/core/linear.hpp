#pragma once

#include <vector>

#include "core/matrix.hpp"

namespace chanpred::ml {

struct LinearModel {
  std::vector<double> weights;  // one per standardized feature
  double bias = 0.0;
  bool rank_deficient = false;  // min-norm solution was used
};

// Least squares via Householder QR with column pivoting; rank-deficient
// designs fall back to the minimum-norm solution (complete orthogonal
// decomposition) and are flagged.
LinearModel fit_linear(const Matrix& x, const std::vector<double>& y);

double predict_linear(const LinearModel& m, const double* row, std::size_t n);

}  // namespace chanpred::ml
