#include "core/svr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace chanpred::ml {

namespace {

double rbf(const double* u, const double* v, std::size_t n, double gamma) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = u[i] - v[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

constexpr double kTau = 1e-12;

}  // namespace

SvrModel fit_svr(const Matrix& x, const std::vector<double>& y, const SvrHyper& hyper) {
  const std::size_t l = x.rows;
  if (l < 2) throw std::domain_error("fit_svr: need at least 2 rows");
  if (x.rows != y.size()) throw std::domain_error("fit_svr: row count mismatch");
  if (!(hyper.c > 0.0) || hyper.epsilon < 0.0)
    throw std::domain_error("fit_svr: invalid hyperparameters");
  const double gamma =
      hyper.gamma > 0.0 ? hyper.gamma : 1.0 / static_cast<double>(std::max<std::size_t>(x.cols, 1));
  const double c = hyper.c;

  // KKT tolerance scaled to the target magnitude
  double mean_abs = 0.0;
  for (double v : y) mean_abs += std::abs(v);
  mean_abs /= l;
  const double tol = 1e-3 * std::max(1.0, mean_abs);

  // kernel matrix (training sets here are <= a few thousand rows)
  std::vector<double> kmat(l * l);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = i; j < l; ++j)
      kmat[i * l + j] = kmat[j * l + i] = rbf(x.row(i), x.row(j), x.cols, gamma);

  // Standard 2l reformulation: t < l carries label +1 (alpha), t >= l label -1
  // (alpha*); Q_ts = lab_t * lab_s * K.
  const std::size_t n2 = 2 * l;
  auto lab = [l](std::size_t t) { return t < l ? 1.0 : -1.0; };
  auto kidx = [l](std::size_t t) { return t < l ? t : t - l; };
  std::vector<double> alpha(n2, 0.0), grad(n2);
  for (std::size_t i = 0; i < l; ++i) {
    grad[i] = hyper.epsilon - y[i];
    grad[i + l] = hyper.epsilon + y[i];
  }

  const long max_iter = std::max<long>(10000000 / static_cast<long>(n2), 200 * static_cast<long>(n2));
  double violation = 0.0;
  long iter = 0;
  for (;; ++iter) {
    // maximal violating pair; ties resolved by lowest index
    double m_up = -std::numeric_limits<double>::infinity();
    double m_low = std::numeric_limits<double>::infinity();
    long i = -1, j = -1;
    for (std::size_t t = 0; t < n2; ++t) {
      const double yt = lab(t);
      const double v = -yt * grad[t];
      const bool in_up = (yt > 0 && alpha[t] < c) || (yt < 0 && alpha[t] > 0);
      const bool in_low = (yt > 0 && alpha[t] > 0) || (yt < 0 && alpha[t] < c);
      if (in_up && v > m_up) {
        m_up = v;
        i = static_cast<long>(t);
      }
      if (in_low && v < m_low) {
        m_low = v;
        j = static_cast<long>(t);
      }
    }
    violation = m_up - m_low;
    if (violation <= tol || i < 0 || j < 0) break;
    if (iter >= max_iter)
      throw std::runtime_error("fit_svr: SMO did not converge, KKT violation " +
                               std::to_string(violation));

    const std::size_t ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
    const double yi = lab(ii), yj = lab(jj);
    const double kii = kmat[kidx(ii) * l + kidx(ii)];
    const double kjj = kmat[kidx(jj) * l + kidx(jj)];
    const double kij = kmat[kidx(ii) * l + kidx(jj)];
    const double qij = yi * yj * kij;
    const double old_ai = alpha[ii], old_aj = alpha[jj];

    if (yi != yj) {
      double quad = kii + kjj + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[ii] - grad[jj]) / quad;
      const double diff = alpha[ii] - alpha[jj];
      alpha[ii] += delta;
      alpha[jj] += delta;
      if (diff > 0.0) {
        if (alpha[jj] < 0.0) {
          alpha[jj] = 0.0;
          alpha[ii] = diff;
        }
      } else {
        if (alpha[ii] < 0.0) {
          alpha[ii] = 0.0;
          alpha[jj] = -diff;
        }
      }
      if (diff > 0.0) {
        if (alpha[ii] > c) {
          alpha[ii] = c;
          alpha[jj] = c - diff;
        }
      } else {
        if (alpha[jj] > c) {
          alpha[jj] = c;
          alpha[ii] = c + diff;
        }
      }
    } else {
      double quad = kii + kjj - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[ii] - grad[jj]) / quad;
      const double sum = alpha[ii] + alpha[jj];
      alpha[ii] -= delta;
      alpha[jj] += delta;
      if (sum > c) {
        if (alpha[ii] > c) {
          alpha[ii] = c;
          alpha[jj] = sum - c;
        }
      } else {
        if (alpha[jj] < 0.0) {
          alpha[jj] = 0.0;
          alpha[ii] = sum;
        }
      }
      if (sum > c) {
        if (alpha[jj] > c) {
          alpha[jj] = c;
          alpha[ii] = sum - c;
        }
      } else {
        if (alpha[ii] < 0.0) {
          alpha[ii] = 0.0;
          alpha[jj] = sum;
        }
      }
    }

    const double dai = alpha[ii] - old_ai;
    const double daj = alpha[jj] - old_aj;
    for (std::size_t t = 0; t < n2; ++t) {
      const double yt = lab(t);
      const std::size_t kt = kidx(t);
      grad[t] += yt * yi * kmat[kt * l + kidx(ii)] * dai +
                 yt * yj * kmat[kt * l + kidx(jj)] * daj;
    }
  }

  // bias from the free variables, or the midpoint of the violation bounds
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  long n_free = 0;
  for (std::size_t t = 0; t < n2; ++t) {
    const double yg = lab(t) * grad[t];
    if (alpha[t] >= c) {
      if (lab(t) < 0)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (lab(t) > 0)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / n_free : 0.5 * (ub + lb);

  SvrModel model;
  model.gamma = gamma;
  model.c = c;
  model.epsilon = hyper.epsilon;
  model.bias = -rho;
  std::vector<std::size_t> sv;
  for (std::size_t i = 0; i < l; ++i)
    if (alpha[i] - alpha[i + l] != 0.0) sv.push_back(i);
  model.support_vectors = Matrix(sv.size(), x.cols);
  model.dual_coeffs.reserve(sv.size());
  for (std::size_t r = 0; r < sv.size(); ++r) {
    for (std::size_t cidx = 0; cidx < x.cols; ++cidx)
      model.support_vectors(r, cidx) = x(sv[r], cidx);
    model.dual_coeffs.push_back(alpha[sv[r]] - alpha[sv[r] + l]);
  }
  return model;
}

double predict_svr(const SvrModel& m, const double* row, std::size_t n) {
  if (n != m.support_vectors.cols && m.support_vectors.rows > 0)
    throw std::domain_error("predict_svr: dimension mismatch");
  double s = m.bias;
  for (std::size_t i = 0; i < m.support_vectors.rows; ++i)
    s += m.dual_coeffs[i] * rbf(m.support_vectors.row(i), row, n, m.gamma);
  return s;
}

}  // namespace chanpred::ml
