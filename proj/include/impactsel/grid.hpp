#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "impactsel/errors.hpp"

namespace impactsel {

// Observation grid: strictly increasing times in (0, 1]. `step` is the
// minimum adjacent spacing, used as the default candidate-separation delta
// (excludes exact duplicates, keeps every neighbor admissible).
struct Grid {
  std::vector<double> times;
  double step = 0.0;

  std::size_t size() const { return times.size(); }

  static Grid from_times(std::vector<double> t) {
    if (t.size() < 2) throw DataError("grid needs at least 2 times");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!std::isfinite(t[i]) || t[i] <= 0.0 || t[i] > 1.0)
        throw DataError("grid time out of (0,1] at position " + std::to_string(i + 1));
      if (i > 0 && t[i] <= t[i - 1]) throw DataError("grid not strictly increasing");
    }
    Grid g;
    g.step = t[1] - t[0];
    for (std::size_t i = 2; i < t.size(); ++i) g.step = std::min(g.step, t[i] - t[i - 1]);
    g.times = std::move(t);
    return g;
  }

  // m equispaced times i/m, i = 1..m; the first time is 1/m, the last is 1.
  static Grid equispaced(std::size_t m) {
    std::vector<double> t(m);
    for (std::size_t i = 0; i < m; ++i) t[i] = static_cast<double>(i + 1) / static_cast<double>(m);
    return from_times(std::move(t));
  }

  std::size_t nearest_index(double t) const {
    auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.end()) return times.size() - 1;
    std::size_t hi = static_cast<std::size_t>(it - times.begin());
    if (hi == 0) return 0;
    return (t - times[hi - 1] <= times[hi] - t) ? hi - 1 : hi;
  }
};

}  // namespace impactsel
