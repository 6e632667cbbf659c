#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "impactsel/errors.hpp"

namespace impactsel {

// Hausdorff distance between two finite point sets on the line:
// max over both directed max-min distances.
inline double hausdorff(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DataError("hausdorff needs nonempty point sets");
  auto directed = [](std::span<const double> from, std::span<const double> to) {
    double worst = 0.0;
    for (double x : from) {
      double nearest = std::numeric_limits<double>::infinity();
      for (double y : to) nearest = std::min(nearest, std::abs(x - y));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

struct SelectionScore {
  double hausdorff = 0.0;
  std::size_t p_hat = 0;
  std::size_t p_star = 0;
  std::vector<double> selected_times;
  std::vector<double> true_times;
};

inline SelectionScore score_selection(std::span<const double> selected,
                                      std::span<const double> truth) {
  SelectionScore s;
  s.hausdorff = hausdorff(selected, truth);
  s.p_hat = selected.size();
  s.p_star = truth.size();
  s.selected_times.assign(selected.begin(), selected.end());
  s.true_times.assign(truth.begin(), truth.end());
  std::sort(s.selected_times.begin(), s.selected_times.end());
  std::sort(s.true_times.begin(), s.true_times.end());
  return s;
}

}  // namespace impactsel
