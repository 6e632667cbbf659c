#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "impactsel/dataset.hpp"
#include "impactsel/errors.hpp"
#include "impactsel/matrix.hpp"

namespace impactsel {

// Anything that exposes second moments on a grid: the sample estimates below
// or the exact population moments.
template <class M>
concept MomentSource = requires(const M& m, std::size_t i, std::size_t j) {
  { m.grid_size() } -> std::convertible_to<std::size_t>;
  { m.covariance(i, j) } -> std::convertible_to<double>;
  { m.cross_covariance(i) } -> std::convertible_to<double>;
};

// Sample moments with divisor n:
//   cov(s,t)  = (1/n) sum_i (X_i(s) - mean(s)) (X_i(t) - mean(t))
//   cross(t)  = (1/n) sum_i (X_i(t) - mean(t)) (Y_i - mean(Y))
// Covariance entries are recomputed on demand from the centered data; only
// the mean curve and the cross-covariance curve are stored densely. Centered
// data is kept column-major so an entry is one contiguous dot product.
class MomentEstimates {
 public:
  static MomentEstimates from_dataset(const Dataset& train) {
    if (train.n() < 2) throw DataError("moment estimation needs at least 2 trajectories");
    MomentEstimates est;
    const std::size_t n = train.n(), m = train.m();
    est.n_ = n;
    est.mean_.assign(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = train.trajectories.row(i);
      for (std::size_t j = 0; j < m; ++j) est.mean_[j] += row[j];
    }
    for (double& v : est.mean_) v /= static_cast<double>(n);

    est.ybar_ = 0.0;
    for (double y : train.responses) est.ybar_ += y;
    est.ybar_ /= static_cast<double>(n);

    est.centered_cols_ = Matrix(m, n);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = train.trajectories.row(i);
      for (std::size_t j = 0; j < m; ++j) est.centered_cols_(j, i) = row[j] - est.mean_[j];
    }
    est.yc_.resize(n);
    for (std::size_t i = 0; i < n; ++i) est.yc_[i] = train.responses[i] - est.ybar_;

    est.cross_.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j)
      est.cross_[j] = dot(est.centered_cols_.row(j), est.yc_) / static_cast<double>(n);
    return est;
  }

  std::size_t grid_size() const { return mean_.size(); }
  std::size_t sample_size() const { return n_; }

  const std::vector<double>& mean_curve() const { return mean_; }
  double response_mean() const { return ybar_; }
  const std::vector<double>& cross_cov() const { return cross_; }
  double cross_covariance(std::size_t i) const { return cross_[i]; }

  double covariance(std::size_t i, std::size_t j) const {
    return dot(centered_cols_.row(i), centered_cols_.row(j)) / static_cast<double>(n_);
  }
  double variance(std::size_t i) const { return covariance(i, i); }

  // Centered trajectory values, one contiguous span per grid index.
  std::span<const double> centered_column(std::size_t j) const { return centered_cols_.row(j); }
  std::span<const double> centered_responses() const { return {yc_.data(), yc_.size()}; }

 private:
  std::size_t n_ = 0;
  std::vector<double> mean_;
  double ybar_ = 0.0;
  std::vector<double> cross_;
  Matrix centered_cols_;  // m x n, row j = centered values at grid index j
  std::vector<double> yc_;
};

inline MomentEstimates estimate_moments(const Dataset& train) {
  return MomentEstimates::from_dataset(train);
}

namespace detail {

inline void check_indices(std::span<const std::size_t> indices, std::size_t m) {
  if (indices.empty()) throw DataError("index set is empty");
  for (std::size_t a = 0; a < indices.size(); ++a) {
    if (indices[a] >= m)
      throw DataError("grid index " + std::to_string(indices[a]) + " out of range");
    for (std::size_t b = a + 1; b < indices.size(); ++b)
      if (indices[a] == indices[b])
        throw DataError("duplicate grid index " + std::to_string(indices[a]));
  }
}

}  // namespace detail

// Covariance submatrix and cross-covariance subvector at the given indices.
template <MomentSource M>
std::pair<Matrix, std::vector<double>> submatrix(const M& est, std::span<const std::size_t> indices) {
  detail::check_indices(indices, est.grid_size());
  const std::size_t p = indices.size();
  Matrix sigma(p, p);
  std::vector<double> c(p);
  for (std::size_t a = 0; a < p; ++a) {
    c[a] = est.cross_covariance(indices[a]);
    for (std::size_t b = 0; b <= a; ++b) {
      double v = est.covariance(indices[a], indices[b]);
      sigma(a, b) = v;
      sigma(b, a) = v;
    }
  }
  return {std::move(sigma), std::move(c)};
}

}  // namespace impactsel
