#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "impactsel/errors.hpp"
#include "impactsel/grid.hpp"
#include "impactsel/matrix.hpp"
#include "impactsel/rng.hpp"

namespace impactsel {

// n trajectories observed on a common grid, with one scalar response per row.
struct Dataset {
  Grid grid;
  Matrix trajectories;  // n x m
  std::vector<double> responses;

  std::size_t n() const { return trajectories.rows(); }
  std::size_t m() const { return grid.size(); }

  static Dataset create(Grid grid, Matrix trajectories, std::vector<double> responses) {
    if (trajectories.cols() != grid.size())
      throw DataError("trajectory columns (" + std::to_string(trajectories.cols()) +
                      ") do not match grid size (" + std::to_string(grid.size()) + ")");
    if (trajectories.rows() != responses.size())
      throw DataError("trajectory rows do not match response count");
    if (trajectories.rows() == 0) throw DataError("dataset has no rows");
    if (!trajectories.all_finite()) throw DataError("non-finite trajectory value");
    for (double y : responses)
      if (!std::isfinite(y)) throw DataError("non-finite response value");
    Dataset d;
    d.grid = std::move(grid);
    d.trajectories = std::move(trajectories);
    d.responses = std::move(responses);
    return d;
  }

  Dataset take_rows(const std::vector<std::size_t>& rows) const {
    Matrix x(rows.size(), m());
    std::vector<double> y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      auto src = trajectories.row(rows[i]);
      auto dst = x.row(i);
      for (std::size_t j = 0; j < src.size(); ++j) dst[j] = src[j];
      y[i] = responses[rows[i]];
    }
    return create(grid, std::move(x), std::move(y));
  }
};

struct SplitDataset {
  Dataset train;
  Dataset test;
};

// Seeded permutation split; the first n_train permuted rows form the training
// set. Both parts must be nonempty.
inline SplitDataset split(const Dataset& data, std::size_t n_train, std::uint64_t seed) {
  if (n_train == 0 || n_train >= data.n())
    throw DataError("n_train must be in [1, n-1], got " + std::to_string(n_train) +
                    " of " + std::to_string(data.n()));
  std::vector<std::size_t> perm = random_permutation(data.n(), seed);
  std::vector<std::size_t> train_rows(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test_rows(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  return {data.take_rows(train_rows), data.take_rows(test_rows)};
}

}  // namespace impactsel
