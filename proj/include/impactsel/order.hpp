#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "impactsel/errors.hpp"
#include "impactsel/selector.hpp"

namespace impactsel {

/*
 * Order estimation works on the log criterion gaps
 *
 *   L(p) = log(Qmax(p+1) - Qmax(p)),   p = 1..P-1,
 *
 * where gaps are floored at 1e-15 * Qmax(P) before the log so exhausted
 * steps produce a constant minimal value instead of -inf. Informative gaps
 * sit orders of magnitude above the floor, so on the log scale the series
 * splits into a large-gap cluster and a negligible-gap cluster.
 */
struct QmaxSeries {
  std::vector<double> values;    // Qmax(1..P) along the greedy path
  std::vector<double> log_gaps;  // L(1..P-1)
  double gap_floor = 0.0;
  bool all_floored = false;      // every raw gap at or below the floor
};

inline QmaxSeries qmax_series(const SelectionPath& path) {
  if (path.qmax_after.empty()) throw DataError("empty selection path");
  QmaxSeries s;
  s.values = path.qmax_after;
  s.gap_floor = 1e-15 * s.values.back();
  const double log_arg_floor = std::max(s.gap_floor, std::numeric_limits<double>::min());
  s.all_floored = true;
  for (std::size_t p = 0; p + 1 < s.values.size(); ++p) {
    double gap = s.values[p + 1] - s.values[p];
    if (gap > s.gap_floor) s.all_floored = false;
    s.log_gaps.push_back(std::log(std::max(gap, log_arg_floor)));
  }
  return s;
}

namespace detail {

struct TwoMeans {
  std::vector<int> assign;  // 0 = lower-center cluster, 1 = upper
  double c0 = 0.0, c1 = 0.0;
};

// 1-D 2-means, centers seeded at min and max, at most 100 Lloyd iterations.
// Assignment ties go to the lower center; empty clusters keep their center.
inline TwoMeans lloyd_two_means(const std::vector<double>& x) {
  TwoMeans km;
  km.c0 = *std::min_element(x.begin(), x.end());
  km.c1 = *std::max_element(x.begin(), x.end());
  km.assign.assign(x.size(), 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      int a = (std::abs(x[i] - km.c0) <= std::abs(x[i] - km.c1)) ? 0 : 1;
      if (a != km.assign[i]) {
        km.assign[i] = a;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
    double s0 = 0.0, s1 = 0.0;
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (km.assign[i] == 0) {
        s0 += x[i];
        ++n0;
      } else {
        s1 += x[i];
        ++n1;
      }
    }
    if (n0 > 0) km.c0 = s0 / static_cast<double>(n0);
    if (n1 > 0) km.c1 = s1 / static_cast<double>(n1);
  }
  return km;
}

}  // namespace detail

// Cluster the log gaps into large and negligible and return the smallest p
// whose gap and all later gaps are negligible. Degenerate series:
//   - every gap floored: one point already explains everything, p = 1;
//   - fewer than two gaps, or all gaps equal: no cluster structure, p = P;
//   - L(1) itself negligible: p = 1, flagged through `warning`.
inline std::size_t estimate_p_kmeans(const QmaxSeries& series, std::string* warning = nullptr) {
  const std::size_t P = series.values.size();
  if (series.all_floored) {
    if (warning && P > 1)
      *warning = "criterion gains beyond the first point are all negligible; p set to 1";
    return 1;
  }
  if (series.log_gaps.size() < 2) return P;
  const double lo = *std::min_element(series.log_gaps.begin(), series.log_gaps.end());
  const double hi = *std::max_element(series.log_gaps.begin(), series.log_gaps.end());
  if (lo == hi) return P;

  detail::TwoMeans km = detail::lloyd_two_means(series.log_gaps);
  const int small = km.c0 <= km.c1 ? 0 : 1;
  if (km.assign[0] == small) {
    if (warning)
      *warning = "first criterion gap already belongs to the negligible cluster; p set to 1";
    return 1;
  }
  for (std::size_t p = 2; p < P; ++p) {
    bool tail_small = true;
    for (std::size_t q = p; q < P; ++q)
      if (km.assign[q - 1] != small) {
        tail_small = false;
        break;
      }
    if (tail_small) return p;
  }
  return P;
}

// Threshold rule: p = min{ p : Qmax(p+1) - Qmax(p) < rho * Qmax(1) }, or P
// when no gap falls below the threshold.
inline std::size_t estimate_p_threshold(const QmaxSeries& series, double rho) {
  if (!std::isfinite(rho) || rho <= 0.0) throw DataError("rho must be positive");
  const std::size_t P = series.values.size();
  const double eps = rho * series.values.front();
  for (std::size_t p = 1; p < P; ++p)
    if (series.values[p] - series.values[p - 1] < eps) return p;
  return P;
}

}  // namespace impactsel
