#pragma once

#include <cstddef>
#include <vector>

#include "impactsel/errors.hpp"
#include "impactsel/grid.hpp"
#include "impactsel/matrix.hpp"
#include "impactsel/processes.hpp"

namespace impactsel {

// Exact second moments of a sparse model Y = sum_j w_j X(t*_j) + noise on a
// known process, evaluated on a grid. Drop-in replacement for the sample
// moments wherever a MomentSource is accepted, which turns the selector into
// its population-level oracle:
//   cov(i,j)  = K(t_i, t_j)
//   cross(i)  = sum_j w_j K(t_i, t*_j)
class PopulationMoments {
 public:
  PopulationMoments(const ProcessSpec& spec, const Grid& grid,
                    const std::vector<double>& true_points,
                    const std::vector<double>& true_weights)
      : cov_(grid.size(), grid.size()), cross_(grid.size(), 0.0) {
    spec.validate();
    if (true_points.size() != true_weights.size() || true_points.empty())
      throw DataError("population moments need matching nonempty points and weights");
    const std::size_t m = grid.size();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        double k = cov_kernel(spec, grid.times[i], grid.times[j]);
        cov_(i, j) = k;
        cov_(j, i) = k;
      }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < true_points.size(); ++j)
        cross_[i] += true_weights[j] * cov_kernel(spec, grid.times[i], true_points[j]);
  }

  std::size_t grid_size() const { return cross_.size(); }
  double covariance(std::size_t i, std::size_t j) const { return cov_(i, j); }
  double cross_covariance(std::size_t i) const { return cross_[i]; }

 private:
  Matrix cov_;
  std::vector<double> cross_;
};

}  // namespace impactsel
