#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "impactsel/dataset.hpp"
#include "impactsel/errors.hpp"
#include "impactsel/metrics.hpp"
#include "impactsel/moments.hpp"
#include "impactsel/order.hpp"
#include "impactsel/processes.hpp"
#include "impactsel/regressor.hpp"
#include "impactsel/selector.hpp"
#include "impactsel/version.hpp"

namespace impactsel {

enum class OrderMethod { kmeans, threshold };

inline std::string to_string(OrderMethod m) {
  return m == OrderMethod::kmeans ? "kmeans" : "threshold";
}

inline OrderMethod order_method_from_string(const std::string& s) {
  if (s == "kmeans") return OrderMethod::kmeans;
  if (s == "threshold") return OrderMethod::threshold;
  throw DataError("unknown order method '" + s + "' (expected kmeans or threshold)");
}

// One simulation experiment: process + model + sampling sizes + selection
// settings. Every replication derives its own seed as base_seed + rep_index,
// so results do not depend on scheduling.
struct ExperimentConfig {
  ProcessSpec process;
  RegressionModelSpec model;
  std::size_t n_train = 100;
  std::size_t n_test = 50;
  std::size_t grid_size = 100;
  std::size_t reps = 100;
  SelectionConstraints constraints;
  OrderMethod order_method = OrderMethod::kmeans;
  double rho = 0.01;
  std::uint64_t base_seed = 12345;
  double table_scale = 1.0;  // divides values in the exported table, 1 = off

  void validate() const {
    process.validate();
    model.validate();
    constraints.validate();
    if (n_train < 2) throw DataError("n_train must be at least 2");
    if (n_test < 1) throw DataError("n_test must be at least 1");
    if (grid_size < 2) throw DataError("grid_size must be at least 2");
    if (reps < 1) throw DataError("reps must be at least 1");
    if (!std::isfinite(rho) || rho <= 0.0) throw DataError("rho must be positive");
    if (!std::isfinite(table_scale) || table_scale <= 0.0)
      throw DataError("table_scale must be positive");
  }
};

struct RepRecord {
  std::size_t rep = 0;
  double rmse = 0.0;
  std::size_t p_hat = 0;
  std::vector<double> selected_times;
  std::optional<double> hausdorff;     // sparse models only
  std::optional<std::size_t> p_star;   // sparse models only
  double wall_time_s = 0.0;
  std::vector<std::string> warnings;
  std::string error;  // nonempty marks a failed replication
};

struct Aggregate {
  double mean = 0.0;
  double sd = 0.0;  // divisor k-1 over successful reps; 0 when k == 1
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string version;
  std::vector<RepRecord> records;
  std::size_t failed = 0;
  Aggregate rmse;
  Aggregate p_hat;
  std::optional<Aggregate> hausdorff;
};

namespace detail {

inline std::size_t estimate_order(const QmaxSeries& series, OrderMethod method, double rho,
                                  std::vector<std::string>& warnings) {
  if (method == OrderMethod::threshold) return estimate_p_threshold(series, rho);
  std::string warn;
  std::size_t p = estimate_p_kmeans(series, &warn);
  if (!warn.empty()) warnings.push_back(warn);
  return p;
}

}  // namespace detail

// Simulate, split, select, estimate the order, fit, and score one seeded
// replication of the experiment.
inline RepRecord run_replication(const ExperimentConfig& config, std::size_t rep_index) {
  config.validate();
  auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t seed = config.base_seed + rep_index;
  const Grid grid = Grid::equispaced(config.grid_size);

  Matrix paths = sample_paths(config.process, grid, config.n_train + config.n_test,
                              derive_seed(seed, 1));
  std::vector<double> y = gen_response(config.model, paths, grid, derive_seed(seed, 2));
  Dataset data = Dataset::create(grid, std::move(paths), std::move(y));
  SplitDataset parts = split(data, config.n_train, derive_seed(seed, 3));

  RepRecord rec;
  rec.rep = rep_index;
  MomentEstimates est = estimate_moments(parts.train);
  SelectionPath path = greedy_select(est, grid, config.constraints);
  QmaxSeries series = qmax_series(path);
  rec.p_hat = detail::estimate_order(series, config.order_method, config.rho, rec.warnings);

  std::vector<std::size_t> chosen(path.selected.begin(),
                                  path.selected.begin() + static_cast<std::ptrdiff_t>(rec.p_hat));
  for (std::size_t idx : chosen) rec.selected_times.push_back(grid.times[idx]);

  LinearPredictor pred = fit(est, grid, chosen);
  std::vector<double> yhat = predict(pred, parts.test);
  rec.rmse = rmse(yhat, parts.test.responses);

  if (config.model.sparse()) {
    SelectionScore score = score_selection(rec.selected_times, config.model.true_points);
    rec.hausdorff = score.hausdorff;
    rec.p_star = score.p_star;
  }
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

namespace detail {

inline Aggregate aggregate_field(const std::vector<RepRecord>& records, double (*get)(const RepRecord&)) {
  Aggregate agg;
  std::size_t k = 0;
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    agg.mean += get(r);
    ++k;
  }
  if (k == 0) return agg;
  agg.mean /= static_cast<double>(k);
  if (k > 1) {
    double ss = 0.0;
    for (const auto& r : records) {
      if (!r.error.empty()) continue;
      double d = get(r) - agg.mean;
      ss += d * d;
    }
    agg.sd = std::sqrt(ss / static_cast<double>(k - 1));
  }
  return agg;
}

}  // namespace detail

// All replications, serial or on `jobs` threads. Records land in replication
// order and aggregates are reduced serially, so the report is identical for
// any job count. More than 10% failed replications aborts.
inline ExperimentReport run_experiment(const ExperimentConfig& config, unsigned jobs = 1) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  report.version = kVersion;
  report.records.resize(config.reps);

  auto run_one = [&](std::size_t i) {
    try {
      report.records[i] = run_replication(config, i);
    } catch (const std::exception& e) {
      report.records[i] = RepRecord{};
      report.records[i].rep = i;
      report.records[i].error = e.what();
    }
  };

  if (jobs <= 1 || config.reps == 1) {
    for (std::size_t i = 0; i < config.reps; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= config.reps) return;
        run_one(i);
      }
    };
    std::vector<std::thread> pool;
    unsigned k = std::min<unsigned>(jobs, static_cast<unsigned>(config.reps));
    pool.reserve(k);
    for (unsigned t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& r : report.records)
    if (!r.error.empty()) ++report.failed;
  if (report.failed * 10 > config.reps)
    throw NumericalError("experiment failed: " + std::to_string(report.failed) + " of " +
                         std::to_string(config.reps) + " replications errored (over 10%)");

  report.rmse = detail::aggregate_field(report.records, [](const RepRecord& r) { return r.rmse; });
  report.p_hat = detail::aggregate_field(
      report.records, [](const RepRecord& r) { return static_cast<double>(r.p_hat); });
  if (config.model.sparse())
    report.hausdorff = detail::aggregate_field(
        report.records, [](const RepRecord& r) { return r.hausdorff.value_or(0.0); });
  return report;
}

// Selection summary for one dataset: the greedy criterion path, both order
// diagnostics, and the fitted predictor at the estimated order.
struct SelectionReport {
  std::vector<std::size_t> selected_indices;
  std::vector<double> selected_times;
  std::vector<double> qmax_series;
  std::vector<double> log_gaps;
  std::size_t p_hat = 0;
  std::string order_method;
  std::vector<double> coefficients;
  double intercept = 0.0;
  std::vector<std::string> warnings;
};

inline SelectionReport select_on_dataset(const Dataset& data, const SelectionConstraints& cons,
                                         OrderMethod method, double rho) {
  MomentEstimates est = estimate_moments(data);
  SelectionPath path = greedy_select(est, data.grid, cons);
  if (path.selected.empty())
    throw NumericalError("no selectable points: every candidate is redundant");

  SelectionReport rep;
  if (path.selected.size() < cons.max_p)
    rep.warnings.push_back("selection stopped early at " + std::to_string(path.selected.size()) +
                           " points: remaining candidates redundant");
  QmaxSeries series = qmax_series(path);
  rep.p_hat = detail::estimate_order(series, method, rho, rep.warnings);
  rep.qmax_series = series.values;
  rep.log_gaps = series.log_gaps;
  rep.order_method = to_string(method);
  rep.selected_indices.assign(path.selected.begin(),
                              path.selected.begin() + static_cast<std::ptrdiff_t>(rep.p_hat));
  for (std::size_t idx : rep.selected_indices) rep.selected_times.push_back(data.grid.times[idx]);
  LinearPredictor pred = fit(est, data.grid, rep.selected_indices);
  rep.coefficients = pred.coefficients;
  rep.intercept = pred.intercept;
  return rep;
}

}  // namespace impactsel
