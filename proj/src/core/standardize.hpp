#pragma once

#include <vector>

#include "core/matrix.hpp"

namespace chanpred::ml {

// Per-feature (x - mu) / sigma with population sigma; constant columns are
// dropped and remembered so raw rows can be transformed at predict time.
class Standardizer {
 public:
  static Standardizer fit(const Matrix& x);  // throws on < 2 rows

  Matrix transform(const Matrix& x_raw) const;  // throws on column mismatch

  std::size_t raw_cols() const { return mu_.size(); }
  const std::vector<std::size_t>& kept() const { return kept_; }
  const std::vector<double>& mu() const { return mu_; }
  const std::vector<double>& sigma() const { return sigma_; }

  // for persistence
  static Standardizer from_parts(std::vector<double> mu, std::vector<double> sigma,
                                 std::vector<std::size_t> kept);

 private:
  std::vector<double> mu_;     // per raw column
  std::vector<double> sigma_;  // per raw column (0 for dropped)
  std::vector<std::size_t> kept_;
};

}  // namespace chanpred::ml
