#pragma once

#include <vector>

#include "core/matrix.hpp"

namespace chanpred::ml {

struct TreeHyper {
  int max_depth = 8;        // <= 0 means unlimited
  int min_samples_leaf = 5;
};

struct TreeNode {
  int split_feature = -1;       // -1 marks a leaf
  double split_threshold = 0.0;  // go left when x[f] <= threshold
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf: mean of training targets
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // node 0 is the root
  TreeHyper hyper;
};

// CART with greedy variance-reduction splits; exhaustive midpoint thresholds,
// ties broken by lowest feature index then lowest threshold.
TreeModel fit_tree(const Matrix& x, const std::vector<double>& y, const TreeHyper& hyper);

double predict_tree(const TreeModel& m, const double* row, std::size_t n);

}  // namespace chanpred::ml
