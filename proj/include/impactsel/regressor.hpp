#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "impactsel/cholesky.hpp"
#include "impactsel/dataset.hpp"
#include "impactsel/errors.hpp"
#include "impactsel/grid.hpp"
#include "impactsel/moments.hpp"

namespace impactsel {

// Linear predictor on a fixed set of impact points:
//   Yhat = intercept + sum_j coefficients[j] * X(times[j])
struct LinearPredictor {
  std::vector<std::size_t> indices;
  std::vector<double> times;
  std::vector<double> coefficients;
  double intercept = 0.0;
};

// Least squares on the selected columns via the moment estimates:
// beta = Sigma_T^{-1} c_T, intercept = mean(Y) - beta' mean(X(T)).
inline LinearPredictor fit(const MomentEstimates& est, const Grid& grid,
                           std::span<const std::size_t> indices) {
  if (est.grid_size() != grid.size()) throw DataError("moments do not match grid");
  auto [sigma, c] = submatrix(est, indices);
  LowerCholesky chol = LowerCholesky::factor(sigma);
  LinearPredictor pred;
  pred.coefficients = chol.backward_solve(chol.forward_solve(c));
  pred.indices.assign(indices.begin(), indices.end());
  pred.intercept = est.response_mean();
  for (std::size_t j = 0; j < indices.size(); ++j) {
    pred.times.push_back(grid.times[indices[j]]);
    pred.intercept -= pred.coefficients[j] * est.mean_curve()[indices[j]];
  }
  return pred;
}

// Predictions for paths observed on a grid carrying the predictor's points.
// Each predictor time must match the grid time at its index.
inline std::vector<double> predict(const LinearPredictor& pred, const Matrix& paths,
                                   const Grid& grid) {
  if (paths.cols() != grid.size()) throw DataError("paths do not match grid");
  for (std::size_t j = 0; j < pred.indices.size(); ++j) {
    if (pred.indices[j] >= grid.size() ||
        std::abs(grid.times[pred.indices[j]] - pred.times[j]) > 1e-9)
      throw DataError("grid mismatch: predictor time " + std::to_string(pred.times[j]) +
                      " not at grid index " + std::to_string(pred.indices[j]));
  }
  std::vector<double> out(paths.rows());
  for (std::size_t i = 0; i < paths.rows(); ++i) {
    double s = pred.intercept;
    for (std::size_t j = 0; j < pred.indices.size(); ++j)
      s += pred.coefficients[j] * paths(i, pred.indices[j]);
    out[i] = s;
  }
  return out;
}

inline std::vector<double> predict(const LinearPredictor& pred, const Dataset& data) {
  return predict(pred, data.trajectories, data.grid);
}

// Relative squared prediction error: sum (Yhat - Y)^2 / sum Y^2.
inline double rmse(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size() || actual.empty())
    throw DataError("prediction and actual lengths differ or are empty");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    num += (predicted[i] - actual[i]) * (predicted[i] - actual[i]);
    den += actual[i] * actual[i];
  }
  if (den == 0.0) throw DataError("actual responses are all zero; relative error undefined");
  return num / den;
}

}  // namespace impactsel
