#include "core/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace chanpred::ml {

namespace {

// In-place Householder QR with column pivoting on A (m x n, m >= n);
// reflectors stored below the diagonal, scalars in tau, permutation in perm.
// Applies the reflectors to rhs as it goes, so rhs becomes Q^T y.
int pivoted_qr(Matrix& a, std::vector<double>& tau, std::vector<std::size_t>& perm,
               std::vector<double>& rhs) {
  const std::size_t m = a.rows, n = a.cols;
  tau.assign(n, 0.0);
  perm.resize(n);
  std::iota(perm.begin(), perm.end(), 0);

  std::vector<double> colnorm(n, 0.0);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < m; ++r) colnorm[c] += a(r, c) * a(r, c);

  double r00 = 0.0;
  int rank = 0;
  for (std::size_t k = 0; k < n; ++k) {
    // pivot: remaining column with the largest residual norm
    std::size_t best = k;
    for (std::size_t c = k + 1; c < n; ++c)
      if (colnorm[c] > colnorm[best]) best = c;
    if (best != k) {
      for (std::size_t r = 0; r < m; ++r) std::swap(a(r, k), a(r, best));
      std::swap(colnorm[k], colnorm[best]);
      std::swap(perm[k], perm[best]);
    }

    double nrm = 0.0;
    for (std::size_t r = k; r < m; ++r) nrm += a(r, k) * a(r, k);
    nrm = std::sqrt(nrm);
    if (k == 0) r00 = nrm;
    const double tol = r00 * std::max(m, n) * std::numeric_limits<double>::epsilon();
    if (nrm <= tol) break;  // remaining block is numerically zero
    ++rank;

    const double alpha = a(k, k) >= 0.0 ? -nrm : nrm;
    const double vk = a(k, k) - alpha;
    a(k, k) = alpha;
    // v = [1, a(k+1..m,k)/vk]; tau = -vk/alpha
    for (std::size_t r = k + 1; r < m; ++r) a(r, k) /= vk;
    tau[k] = -vk / alpha;

    auto apply = [&](auto&& get, auto&& set) {
      double dot = get(k);
      for (std::size_t r = k + 1; r < m; ++r) dot += a(r, k) * get(r);
      dot *= tau[k];
      set(k, get(k) - dot);
      for (std::size_t r = k + 1; r < m; ++r) set(r, get(r) - dot * a(r, k));
    };
    for (std::size_t c = k + 1; c < n; ++c) {
      apply([&](std::size_t r) { return a(r, c); },
            [&](std::size_t r, double v) { a(r, c) = v; });
      colnorm[c] -= a(k, c) * a(k, c);
    }
    apply([&](std::size_t r) { return rhs[r]; },
          [&](std::size_t r, double v) { rhs[r] = v; });
  }
  return rank;
}

}  // namespace

LinearModel fit_linear(const Matrix& x, const std::vector<double>& y) {
  if (x.rows != y.size()) throw std::domain_error("fit_linear: row count mismatch");
  const std::size_t m = x.rows;
  const std::size_t n = x.cols + 1;  // bias column appended
  if (m < n) throw std::domain_error("fit_linear: need rows >= features + 1");

  Matrix a(m, n);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < x.cols; ++c) a(r, c) = x(r, c);
    a(r, x.cols) = 1.0;
  }
  std::vector<double> rhs = y;
  std::vector<double> tau;
  std::vector<std::size_t> perm;
  const int rank = pivoted_qr(a, tau, perm, rhs);

  std::vector<double> u(n, 0.0);  // solution in permuted coordinates
  if (static_cast<std::size_t>(rank) == n) {
    for (std::size_t i = n; i-- > 0;) {
      double s = rhs[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * u[j];
      u[i] = s / a(i, i);
    }
  } else {
    // minimum-norm solution: second QR on R1^T annihilates the trailing block
    const std::size_t r = static_cast<std::size_t>(rank);
    Matrix rt(n, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i; j < n; ++j) rt(j, i) = a(i, j);
    std::vector<double> dummy(n, 0.0), tau2;
    std::vector<std::size_t> perm2;
    // no pivoting needed: R1^T has full column rank r
    {
      Matrix& b = rt;
      tau2.assign(r, 0.0);
      for (std::size_t k = 0; k < r; ++k) {
        double nrm = 0.0;
        for (std::size_t i = k; i < n; ++i) nrm += b(i, k) * b(i, k);
        nrm = std::sqrt(nrm);
        const double alpha = b(k, k) >= 0.0 ? -nrm : nrm;
        const double vk = b(k, k) - alpha;
        b(k, k) = alpha;
        for (std::size_t i = k + 1; i < n; ++i) b(i, k) /= vk;
        tau2[k] = -vk / alpha;
        for (std::size_t c = k + 1; c < r; ++c) {
          double dotv = b(k, c);
          for (std::size_t i = k + 1; i < n; ++i) dotv += b(i, k) * b(i, c);
          dotv *= tau2[k];
          b(k, c) -= dotv;
          for (std::size_t i = k + 1; i < n; ++i) b(i, c) -= dotv * b(i, k);
        }
      }
      // solve T^T v = c where T is the upper-triangular factor (stored in b)
      std::vector<double> v(r, 0.0);
      for (std::size_t i = 0; i < r; ++i) {
        double s = rhs[i];
        for (std::size_t j = 0; j < i; ++j) s -= b(j, i) * v[j];
        v[i] = s / b(i, i);
      }
      // u = Q2 * [v; 0] applied as reflectors in reverse
      for (std::size_t i = 0; i < r; ++i) u[i] = v[i];
      for (std::size_t k = r; k-- > 0;) {
        double dotv = u[k];
        for (std::size_t i = k + 1; i < n; ++i) dotv += b(i, k) * u[i];
        dotv *= tau2[k];
        u[k] -= dotv;
        for (std::size_t i = k + 1; i < n; ++i) u[i] -= dotv * b(i, k);
      }
    }
  }

  LinearModel model;
  model.weights.assign(x.cols, 0.0);
  model.rank_deficient = static_cast<std::size_t>(rank) < n;
  for (std::size_t i = 0; i < n; ++i) {
    if (perm[i] == x.cols)
      model.bias = u[i];
    else
      model.weights[perm[i]] = u[i];
  }
  return model;
}

double predict_linear(const LinearModel& m, const double* row, std::size_t n) {
  if (n != m.weights.size()) throw std::domain_error("predict_linear: dimension mismatch");
  double s = m.bias;
  for (std::size_t i = 0; i < n; ++i) s += m.weights[i] * row[i];
  return s;
}

}  // namespace chanpred::ml
