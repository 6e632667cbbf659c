#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "impactsel/bench.hpp"
#include "impactsel/report_io.hpp"
#include "test_util.hpp"

using namespace impactsel;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig config;
  config.process = ProcessSpec::brownian();
  config.model = RegressionModelSpec::model1(0.2);
  config.n_train = 40;
  config.n_test = 10;
  config.grid_size = 25;
  config.reps = 8;
  config.base_seed = 777;
  return config;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Replication, NoiselessRunRecoversModel) {
  ExperimentConfig config;
  config.process = ProcessSpec::brownian();
  config.model = RegressionModelSpec::model1(0.0);
  config.n_train = 400;
  config.n_test = 50;
  config.reps = 1;
  RepRecord rec = run_replication(config, 0);
  EXPECT_TRUE(rec.error.empty());
  EXPECT_EQ(rec.p_hat, 3u);
  std::vector<double> sorted = rec.selected_times;
  std::sort(sorted.begin(), sorted.end());
  ASSERT_EQ(sorted.size(), 3u);
  EXPECT_NEAR(sorted[0], 0.2, 1e-12);
  EXPECT_NEAR(sorted[1], 0.4, 1e-12);
  EXPECT_NEAR(sorted[2], 0.9, 1e-12);
  EXPECT_LT(rec.rmse, 1e-10);
  ASSERT_TRUE(rec.hausdorff.has_value());
  EXPECT_NEAR(*rec.hausdorff, 0.0, 1e-12);
  EXPECT_EQ(rec.p_star.value_or(0), 3u);
}

TEST(Replication, DeterministicForFixedSeed) {
  ExperimentConfig config = small_config();
  RepRecord a = run_replication(config, 3);
  RepRecord b = run_replication(config, 3);
  EXPECT_EQ(a.rmse, b.rmse);
  EXPECT_EQ(a.p_hat, b.p_hat);
  EXPECT_EQ(a.selected_times, b.selected_times);
  EXPECT_EQ(a.hausdorff.has_value(), b.hausdorff.has_value());
  if (a.hausdorff) EXPECT_EQ(*a.hausdorff, *b.hausdorff);
  EXPECT_EQ(a.warnings, b.warnings);
}

TEST(Replication, DenseModelSkipsSelectionScore) {
  ExperimentConfig config = small_config();
  config.model = RegressionModelSpec::model3(0.2);
  RepRecord rec = run_replication(config, 0);
  EXPECT_TRUE(rec.error.empty());
  EXPECT_FALSE(rec.hausdorff.has_value());
  EXPECT_FALSE(rec.p_star.has_value());
  json j = to_json(rec);
  EXPECT_FALSE(j.contains("hausdorff"));
  EXPECT_FALSE(j.contains("p_star"));
}

TEST(Experiment, SingleRepAggregates) {
  ExperimentConfig config = small_config();
  config.reps = 1;
  ExperimentReport report = run_experiment(config);
  ASSERT_EQ(report.records.size(), 1u);
  EXPECT_EQ(report.failed, 0u);
  EXPECT_DOUBLE_EQ(report.rmse.mean, report.records[0].rmse);
  EXPECT_DOUBLE_EQ(report.rmse.sd, 0.0);
  EXPECT_DOUBLE_EQ(report.p_hat.mean, static_cast<double>(report.records[0].p_hat));
  ASSERT_TRUE(report.hausdorff.has_value());
  EXPECT_DOUBLE_EQ(report.hausdorff->mean, report.records[0].hausdorff.value());
}

TEST(Experiment, ParallelMatchesSerial) {
  ExperimentConfig config = small_config();
  ExperimentReport serial = run_experiment(config, 1);
  ExperimentReport parallel = run_experiment(config, 4);
  ASSERT_EQ(serial.records.size(), parallel.records.size());
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    EXPECT_EQ(serial.records[i].rep, i);
    EXPECT_EQ(serial.records[i].rmse, parallel.records[i].rmse) << i;
    EXPECT_EQ(serial.records[i].p_hat, parallel.records[i].p_hat) << i;
    EXPECT_EQ(serial.records[i].selected_times, parallel.records[i].selected_times) << i;
  }
  EXPECT_EQ(serial.rmse.mean, parallel.rmse.mean);
  EXPECT_EQ(serial.rmse.sd, parallel.rmse.sd);
}

TEST(Experiment, BaseSeedChangesOutcomes) {
  ExperimentConfig config = small_config();
  ExperimentReport a = run_experiment(config);
  config.base_seed = 778;
  ExperimentReport b = run_experiment(config);
  EXPECT_NE(a.records[0].rmse, b.records[0].rmse);
}

TEST(Experiment, AbortsWhenMostRepsFail) {
  ExperimentConfig config = small_config();
  config.grid_size = 10;
  config.model = RegressionModelSpec{1, {0.01}, {1.0}, 0.0};  // below the grid range
  config.reps = 5;
  EXPECT_THROW(run_experiment(config), NumericalError);
}

TEST(Experiment, SdUsesDivisorKMinusOne) {
  // Fabricated records: rmse 1 and 3 -> mean 2, sd sqrt(((1)^2+(1)^2)/1) = sqrt(2)
  std::vector<RepRecord> records(2);
  records[0].rmse = 1.0;
  records[1].rmse = 3.0;
  Aggregate agg = detail::aggregate_field(records, [](const RepRecord& r) { return r.rmse; });
  EXPECT_DOUBLE_EQ(agg.mean, 2.0);
  EXPECT_DOUBLE_EQ(agg.sd, std::sqrt(2.0));
  records[1].error = "boom";
  agg = detail::aggregate_field(records, [](const RepRecord& r) { return r.rmse; });
  EXPECT_DOUBLE_EQ(agg.mean, 1.0);
  EXPECT_DOUBLE_EQ(agg.sd, 0.0);
}

TEST(ReportIo, RoundTripPreservesEverything) {
  ExperimentConfig config = small_config();
  config.reps = 3;
  ExperimentReport report = run_experiment(config);
  std::string dir = testutil::temp_dir();
  write_report(report, dir + "/report.json");
  ExperimentReport back = read_report(dir + "/report.json");
  EXPECT_EQ(to_json(report), to_json(back));
}

TEST(ReportIo, ConfigJsonRoundTrip) {
  ExperimentConfig config = small_config();
  config.process = ProcessSpec::fractional_brownian(0.2);
  config.constraints.delta = 0.05;
  config.order_method = OrderMethod::threshold;
  config.rho = 0.02;
  config.table_scale = 0.01;
  ExperimentConfig back = config_from_json(to_json(config));
  EXPECT_EQ(to_json(config), to_json(back));
}

TEST(ReportIo, BenchmarkConfigArrayExpands) {
  json j = json::parse(R"({
    "process": ["bm", "ibm", {"kind": "fbm", "hurst": 0.2}],
    "model": {"id": 1, "noise_sigma": 0.2},
    "reps": 4, "n_train": 30, "n_test": 10, "grid_size": 20
  })");
  std::vector<ExperimentConfig> configs = benchmark_configs_from_json(j);
  ASSERT_EQ(configs.size(), 3u);
  EXPECT_EQ(configs[0].process.kind, ProcessKind::brownian);
  EXPECT_EQ(configs[1].process.kind, ProcessKind::integrated_brownian);
  EXPECT_EQ(configs[2].process.kind, ProcessKind::fractional_brownian);
  EXPECT_DOUBLE_EQ(configs[2].process.hurst.value(), 0.2);
  for (const auto& c : configs) {
    EXPECT_EQ(c.reps, 4u);
    EXPECT_EQ(c.n_train, 30u);
    EXPECT_EQ(c.model.model_id, 1);
  }
  EXPECT_THROW(benchmark_configs_from_json(json::parse(R"({"process": "nope", "model": 1})")),
               DataError);
}

TEST(ReportIo, ModelVariantParses) {
  json j = json::parse(R"({"id": 2, "variant": "text"})");
  RegressionModelSpec model = model_from_json(j);
  EXPECT_DOUBLE_EQ(model.true_points[2], 0.6);
  RegressionModelSpec display = model_from_json(json::parse(R"({"id": 2})"));
  EXPECT_DOUBLE_EQ(display.true_points[2], 0.67);
}

TEST(ReportIo, TableCsvFormatsScaledColumns) {
  ExperimentReport a;
  a.config.process = ProcessSpec::brownian();
  a.config.model = RegressionModelSpec::model1(0.2);
  a.config.table_scale = 0.01;
  a.rmse = {0.0123, 0.0012};
  a.p_hat = {3.1, 0.4};
  a.hausdorff = Aggregate{0.02, 0.005};
  ExperimentReport b = a;
  b.config.process = ProcessSpec::integrated_brownian();
  b.config.model = RegressionModelSpec::model3(0.2);
  b.hausdorff.reset();

  std::string dir = testutil::temp_dir();
  write_table_csv({a, b}, dir + "/table.csv");
  std::string text = slurp(dir + "/table.csv");
  EXPECT_NE(text.find("[scale 1e-2]"), std::string::npos) << text;
  EXPECT_NE(text.find("bm,1.23 (0.12),0.02 (0.005),3.1 (0.4)"), std::string::npos) << text;
  EXPECT_NE(text.find("ibm,"), std::string::npos);
  EXPECT_NE(text.find(",-,"), std::string::npos) << text;  // missing hausdorff column
  // unscaled table has a plain header
  ExperimentReport plain = a;
  plain.config.table_scale = 1.0;
  write_table_csv({plain}, dir + "/plain.csv");
  EXPECT_EQ(slurp(dir + "/plain.csv").find("[scale"), std::string::npos);
}

TEST(SelectOnDataset, ConstantResponseFallsBackToOnePoint) {
  Grid grid = Grid::equispaced(30);
  Matrix x = sample_paths(ProcessSpec::brownian(), grid, 50, 2026);
  std::vector<double> y(50, 3.25);
  Dataset data = Dataset::create(grid, x, y);
  SelectionReport rep = select_on_dataset(data, {}, OrderMethod::kmeans, 0.01);
  EXPECT_EQ(rep.p_hat, 1u);
  ASSERT_EQ(rep.selected_indices.size(), 1u);
  for (double q : rep.qmax_series) EXPECT_NEAR(q, 0.0, 1e-20);
  EXPECT_NEAR(rep.coefficients[0], 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(rep.intercept, 3.25);
  EXPECT_FALSE(rep.warnings.empty());
}

TEST(SelectOnDataset, ConstantTrajectoriesError) {
  Grid grid = Grid::equispaced(10);
  Matrix x(20, 10, 1.5);
  std::vector<double> y(20);
  for (std::size_t i = 0; i < 20; ++i) y[i] = static_cast<double>(i);
  Dataset data = Dataset::create(grid, x, y);
  EXPECT_THROW(select_on_dataset(data, {}, OrderMethod::kmeans, 0.01), NumericalError);
}

TEST(Experiment, RecoversMostModel2Points) {
  // Five-point model on Brownian paths: most replications should place a
  // selected time within one grid step of at least 4 of the 5 true points.
  ExperimentConfig config;
  config.process = ProcessSpec::brownian();
  config.model = RegressionModelSpec::model2(0.2);
  config.reps = 40;
  ExperimentReport report = run_experiment(config, 4);
  std::size_t good = 0;
  const double tol = 0.01 + 1e-9;
  for (const auto& rec : report.records) {
    if (!rec.error.empty()) continue;
    std::size_t hit = 0;
    for (double truth : config.model.true_points) {
      bool near = false;
      for (double t : rec.selected_times)
        if (std::abs(t - truth) <= tol) near = true;
      if (near) ++hit;
    }
    if (hit >= 4) ++good;
  }
  EXPECT_GE(good, 28u);  // 70% of 40
}
