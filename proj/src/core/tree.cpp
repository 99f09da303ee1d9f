#include "core/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chanpred::ml {

namespace {

struct Builder {
  const Matrix& x;
  const std::vector<double>& y;
  const TreeHyper& hyper;
  std::vector<TreeNode> nodes;

  int build(std::vector<std::size_t>& idx, int depth) {
    const std::size_t n = idx.size();
    double sum = 0.0;
    for (auto i : idx) sum += y[i];
    const double mean = sum / n;
    double sse = 0.0;
    for (auto i : idx) sse += (y[i] - mean) * (y[i] - mean);

    const int node_id = static_cast<int>(nodes.size());
    nodes.push_back({});
    nodes[node_id].value = mean;

    const bool depth_ok = hyper.max_depth <= 0 || depth < hyper.max_depth;
    const std::size_t min_leaf = static_cast<std::size_t>(std::max(hyper.min_samples_leaf, 1));
    if (!depth_ok || n < 2 * min_leaf || sse == 0.0) return node_id;

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_reduction = 0.0;
    std::vector<std::size_t> order(idx);
    const double tsum = sum;
    double tsq = 0.0;
    for (auto i : idx) tsq += y[i] * y[i];
    for (std::size_t f = 0; f < x.cols; ++f) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x(a, f) < x(b, f);
      });
      double lsum = 0.0, lsq = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const double yi = y[order[k]];
        lsum += yi;
        lsq += yi * yi;
        const double xa = x(order[k], f);
        const double xb = x(order[k + 1], f);
        if (xa == xb) continue;
        const std::size_t nl = k + 1, nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double rsum = tsum - lsum, rsq = tsq - lsq;
        const double child_sse =
            (lsq - lsum * lsum / nl) + (rsq - rsum * rsum / nr);
        const double reduction = sse - child_sse;
        // strict improvement keeps the lowest-feature, lowest-threshold winner
        if (reduction > best_reduction) {
          best_reduction = reduction;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (xa + xb);
        }
      }
    }
    if (best_feature < 0) return node_id;

    std::vector<std::size_t> left_idx, right_idx;
    for (auto i : idx)
      (x(i, best_feature) <= best_threshold ? left_idx : right_idx).push_back(i);
    if (left_idx.empty() || right_idx.empty()) return node_id;

    nodes[node_id].split_feature = best_feature;
    nodes[node_id].split_threshold = best_threshold;
    const int l = build(left_idx, depth + 1);
    const int r = build(right_idx, depth + 1);
    nodes[node_id].left = l;
    nodes[node_id].right = r;
    return node_id;
  }
};

}  // namespace

TreeModel fit_tree(const Matrix& x, const std::vector<double>& y, const TreeHyper& hyper) {
  if (x.rows != y.size()) throw std::domain_error("fit_tree: row count mismatch");
  if (x.rows < static_cast<std::size_t>(std::max(hyper.min_samples_leaf, 1)))
    throw std::domain_error("fit_tree: fewer rows than min_samples_leaf");
  Builder b{x, y, hyper, {}};
  std::vector<std::size_t> idx(x.rows);
  std::iota(idx.begin(), idx.end(), 0);
  b.build(idx, 0);
  TreeModel m;
  m.nodes = std::move(b.nodes);
  m.hyper = hyper;
  return m;
}

double predict_tree(const TreeModel& m, const double* row, std::size_t n) {
  (void)n;
  int cur = 0;
  while (m.nodes[cur].split_feature >= 0) {
    const TreeNode& nd = m.nodes[cur];
    cur = row[nd.split_feature] <= nd.split_threshold ? nd.left : nd.right;
  }
  return m.nodes[cur].value;
}

}  // namespace chanpred::ml
