#include "core/standardize.hpp"

#include <cmath>

namespace chanpred::ml {

Standardizer Standardizer::fit(const Matrix& x) {
  if (x.rows < 2) throw std::domain_error("standardizer: need at least 2 rows");
  Standardizer s;
  s.mu_.assign(x.cols, 0.0);
  s.sigma_.assign(x.cols, 0.0);
  for (std::size_t c = 0; c < x.cols; ++c) {
    double m = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) m += x(r, c);
    m /= x.rows;
    double v = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) v += (x(r, c) - m) * (x(r, c) - m);
    v /= x.rows;
    s.mu_[c] = m;
    const double sd = std::sqrt(v);
    if (sd > 0.0) {
      s.sigma_[c] = sd;
      s.kept_.push_back(c);
    }
  }
  return s;
}

Matrix Standardizer::transform(const Matrix& x_raw) const {
  if (x_raw.cols != mu_.size())
    throw std::domain_error("standardizer: raw column count mismatch");
  Matrix out(x_raw.rows, kept_.size());
  for (std::size_t r = 0; r < x_raw.rows; ++r)
    for (std::size_t k = 0; k < kept_.size(); ++k) {
      const std::size_t c = kept_[k];
      out(r, k) = (x_raw(r, c) - mu_[c]) / sigma_[c];
    }
  return out;
}

Standardizer Standardizer::from_parts(std::vector<double> mu, std::vector<double> sigma,
                                      std::vector<std::size_t> kept) {
  Standardizer s;
  s.mu_ = std::move(mu);
  s.sigma_ = std::move(sigma);
  s.kept_ = std::move(kept);
  return s;
}

}  // namespace chanpred::ml
