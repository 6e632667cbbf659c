#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "impactsel/cholesky.hpp"
#include "impactsel/errors.hpp"
#include "impactsel/grid.hpp"
#include "impactsel/matrix.hpp"
#include "impactsel/rng.hpp"

namespace impactsel {

enum class ProcessKind {
  brownian,
  geometric_brownian,
  integrated_brownian,
  ornstein_uhlenbeck,
  fractional_brownian,
};

struct OuParams {
  double theta = 1.0;
  double mu = 1.0;
  double sigma = 1.0;
};

struct ProcessSpec {
  ProcessKind kind = ProcessKind::brownian;
  std::optional<double> hurst;  // fractional Brownian only
  std::optional<OuParams> ou;   // Ornstein-Uhlenbeck only

  static ProcessSpec brownian() { return {ProcessKind::brownian, {}, {}}; }
  static ProcessSpec geometric_brownian() { return {ProcessKind::geometric_brownian, {}, {}}; }
  static ProcessSpec integrated_brownian() { return {ProcessKind::integrated_brownian, {}, {}}; }
  static ProcessSpec ornstein_uhlenbeck(OuParams p = {}) {
    return {ProcessKind::ornstein_uhlenbeck, {}, p};
  }
  static ProcessSpec fractional_brownian(double h) {
    return {ProcessKind::fractional_brownian, h, {}};
  }

  void validate() const {
    if (hurst.has_value() != (kind == ProcessKind::fractional_brownian))
      throw DataError("hurst must be given exactly for fractional Brownian motion");
    if (hurst && (*hurst <= 0.0 || *hurst >= 1.0)) throw DataError("hurst must lie in (0,1)");
    if (ou.has_value() != (kind == ProcessKind::ornstein_uhlenbeck))
      throw DataError("ou params must be given exactly for Ornstein-Uhlenbeck");
    if (ou && (ou->theta <= 0.0 || ou->sigma <= 0.0))
      throw DataError("ou theta and sigma must be positive");
  }

  std::string label() const {
    switch (kind) {
      case ProcessKind::brownian: return "bm";
      case ProcessKind::geometric_brownian: return "gbm";
      case ProcessKind::integrated_brownian: return "ibm";
      case ProcessKind::ornstein_uhlenbeck: return "ou";
      case ProcessKind::fractional_brownian: {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "fbm %g", *hurst);
        return buf;
      }
    }
    return "?";
  }
};

inline double mean_fn(const ProcessSpec& spec, double t) {
  switch (spec.kind) {
    case ProcessKind::brownian:
    case ProcessKind::integrated_brownian:
    case ProcessKind::fractional_brownian:
      return 0.0;
    case ProcessKind::geometric_brownian:
      return std::exp(t / 2.0);
    case ProcessKind::ornstein_uhlenbeck:
      return spec.ou->mu * (1.0 - std::exp(-spec.ou->theta * t));
  }
  return 0.0;
}

/*
 * Exact covariance kernels, all for processes started at 0:
 *   Bm   K(s,t) = min(s,t)
 *   gBm  K(s,t) = e^{(s+t)/2} (e^{min(s,t)} - 1)
 *   iBm  K(s,t) = s^2 (t/2 - s/6),  s <= t   (double integral of min)
 *   OU   K(s,t) = sigma^2/(2 theta) (e^{-theta|t-s|} - e^{-theta(t+s)})
 *   fBm  K(s,t) = (|t|^{2H} + |s|^{2H} - |t-s|^{2H}) / 2
 */
inline double cov_kernel(const ProcessSpec& spec, double s, double t) {
  double lo = std::min(s, t), hi = std::max(s, t);
  switch (spec.kind) {
    case ProcessKind::brownian:
      return lo;
    case ProcessKind::geometric_brownian:
      return std::exp((s + t) / 2.0) * (std::exp(lo) - 1.0);
    case ProcessKind::integrated_brownian:
      return lo * lo * (hi / 2.0 - lo / 6.0);
    case ProcessKind::ornstein_uhlenbeck: {
      double th = spec.ou->theta, sg = spec.ou->sigma;
      return sg * sg / (2.0 * th) * (std::exp(-th * (hi - lo)) - std::exp(-th * (hi + lo)));
    }
    case ProcessKind::fractional_brownian: {
      double h2 = 2.0 * *spec.hurst;
      return (std::pow(hi, h2) + std::pow(lo, h2) - std::pow(hi - lo, h2)) / 2.0;
    }
  }
  return 0.0;
}

namespace detail {

// Factor the grid covariance, escalating diagonal jitter on failure:
// none, then 1e-10 * max(diag), then 1e-8 * max(diag), then fatal.
inline LowerCholesky factor_grid_covariance(const ProcessSpec& spec, const Grid& grid) {
  const std::size_t m = grid.size();
  Matrix sigma(m, m);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double k = cov_kernel(spec, grid.times[i], grid.times[j]);
      sigma(i, j) = k;
      sigma(j, i) = k;
    }
    max_diag = std::max(max_diag, sigma(i, i));
  }
  const double scales[] = {0.0, 1e-10, 1e-8};
  for (double scale : scales) {
    Matrix jittered = sigma;
    for (std::size_t i = 0; i < m; ++i) jittered(i, i) += scale * max_diag;
    try {
      return LowerCholesky::factor(jittered);
    } catch (const NumericalError&) {
      if (scale == 1e-8) throw;
    }
  }
  throw NumericalError("grid covariance factorization failed");
}

}  // namespace detail

// n exact Gaussian draws on the grid: mean + L z with L the factored grid
// covariance. Geometric Brownian paths are the pointwise exp of Brownian
// draws, preserving positivity and the lognormal marginals.
inline Matrix sample_paths(const ProcessSpec& spec, const Grid& grid, std::size_t n,
                           std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw DataError("need at least one path");
  const bool lognormal = spec.kind == ProcessKind::geometric_brownian;
  const ProcessSpec gauss = lognormal ? ProcessSpec::brownian() : spec;

  const std::size_t m = grid.size();
  LowerCholesky chol = detail::factor_grid_covariance(gauss, grid);
  NormalSampler rng(seed);
  Matrix paths(n, m);
  std::vector<double> z(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) z[j] = rng.next();
    auto row = paths.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      double s = mean_fn(gauss, grid.times[j]);
      for (std::size_t k = 0; k <= j; ++k) s += chol.at(j, k) * z[k];
      row[j] = lognormal ? std::exp(s) : s;
    }
  }
  return paths;
}

// Scalar-on-function regression models. Models 1 and 2 are sparse: the
// response loads on a few fixed time points. Model 3 integrates the path
// against log(1+t) over [t_1, t_m] by the composite trapezoid rule.
struct RegressionModelSpec {
  int model_id = 1;
  std::vector<double> true_points;
  std::vector<double> true_weights;
  double noise_sigma = 0.2;

  static RegressionModelSpec model1(double sigma = 0.2) {
    return {1, {0.2, 0.4, 0.9}, {2.0, -5.0, 1.0}, sigma};
  }
  // The `text_variant` places the third point at 0.6 instead of 0.67.
  static RegressionModelSpec model2(double sigma = 0.2, bool text_variant = false) {
    RegressionModelSpec spec{2, {0.16, 0.47, 0.67, 0.85, 0.91}, {2.1, -0.2, -1.9, 5.0, 4.2}, sigma};
    if (text_variant) spec.true_points[2] = 0.6;
    return spec;
  }
  static RegressionModelSpec model3(double sigma = 0.2) { return {3, {}, {}, sigma}; }

  bool sparse() const { return model_id != 3; }

  void validate() const {
    if (model_id < 1 || model_id > 3) throw DataError("model_id must be 1, 2, or 3");
    if (noise_sigma < 0.0) throw DataError("noise_sigma must be nonnegative");
    if (sparse() && (true_points.empty() || true_points.size() != true_weights.size()))
      throw DataError("sparse model needs matching true_points and true_weights");
  }
};

namespace detail {

// Grid indices of the true points; each must sit within half a grid step.
inline std::vector<std::size_t> snap_points(const Grid& grid, const std::vector<double>& points) {
  std::vector<std::size_t> idx(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    std::size_t k = grid.nearest_index(points[j]);
    if (std::abs(grid.times[k] - points[j]) > grid.step / 2.0 + 1e-9)
      throw DataError("true point " + std::to_string(points[j]) + " not on the grid");
    idx[j] = k;
  }
  return idx;
}

inline std::vector<double> trapezoid_weights(const Grid& grid) {
  const std::size_t m = grid.size();
  std::vector<double> w(m);
  w[0] = (grid.times[1] - grid.times[0]) / 2.0;
  w[m - 1] = (grid.times[m - 1] - grid.times[m - 2]) / 2.0;
  for (std::size_t j = 1; j + 1 < m; ++j) w[j] = (grid.times[j + 1] - grid.times[j - 1]) / 2.0;
  return w;
}

}  // namespace detail

inline std::vector<double> gen_response(const RegressionModelSpec& model, const Matrix& paths,
                                        const Grid& grid, std::uint64_t seed) {
  model.validate();
  if (paths.cols() != grid.size()) throw DataError("paths do not match grid");
  const std::size_t n = paths.rows();
  std::vector<double> y(n, 0.0);

  if (model.sparse()) {
    std::vector<std::size_t> idx = detail::snap_points(grid, model.true_points);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < idx.size(); ++j)
        s += model.true_weights[j] * paths(i, idx[j]);
      y[i] = s;
    }
  } else {
    std::vector<double> w = detail::trapezoid_weights(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) w[j] *= std::log1p(grid.times[j]);
    for (std::size_t i = 0; i < n; ++i) y[i] = dot(paths.row(i), w);
  }

  if (model.noise_sigma > 0.0) {
    NormalSampler rng(seed);
    for (std::size_t i = 0; i < n; ++i) y[i] += model.noise_sigma * rng.next();
  }
  return y;
}

}  // namespace impactsel
