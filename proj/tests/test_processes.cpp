#include <cmath>

#include <gtest/gtest.h>

#include "impactsel/moments.hpp"
#include "impactsel/processes.hpp"
#include "test_util.hpp"

using namespace impactsel;

namespace {

const ProcessSpec kAllSpecs[] = {
    ProcessSpec::brownian(),           ProcessSpec::geometric_brownian(),
    ProcessSpec::integrated_brownian(), ProcessSpec::ornstein_uhlenbeck(),
    ProcessSpec::fractional_brownian(0.2), ProcessSpec::fractional_brownian(0.8),
};

}  // namespace

TEST(Processes, MeanFunctions) {
  EXPECT_DOUBLE_EQ(mean_fn(ProcessSpec::brownian(), 0.7), 0.0);
  EXPECT_DOUBLE_EQ(mean_fn(ProcessSpec::integrated_brownian(), 0.7), 0.0);
  EXPECT_DOUBLE_EQ(mean_fn(ProcessSpec::fractional_brownian(0.2), 0.7), 0.0);
  EXPECT_NEAR(mean_fn(ProcessSpec::ornstein_uhlenbeck(), 1.0), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(mean_fn(ProcessSpec::geometric_brownian(), 1.0), std::exp(0.5), 1e-15);
}

TEST(Processes, KernelValues) {
  EXPECT_DOUBLE_EQ(cov_kernel(ProcessSpec::brownian(), 0.2, 0.4), 0.2);
  EXPECT_NEAR(cov_kernel(ProcessSpec::fractional_brownian(0.5), 0.3, 0.7), 0.3, 1e-12);
  EXPECT_NEAR(cov_kernel(ProcessSpec::fractional_brownian(0.8), 0.5, 0.5), std::pow(0.5, 1.6),
              1e-15);
  // integrated Brownian: s^2 (t/2 - s/6) for s <= t
  EXPECT_NEAR(cov_kernel(ProcessSpec::integrated_brownian(), 0.3, 0.5),
              0.09 * (0.25 - 0.05), 1e-15);
  // OU at unit parameters
  EXPECT_NEAR(cov_kernel(ProcessSpec::ornstein_uhlenbeck(), 0.5, 1.0),
              0.5 * (std::exp(-0.5) - std::exp(-1.5)), 1e-15);
  // gBm: e^{(s+t)/2} (e^{min} - 1)
  EXPECT_NEAR(cov_kernel(ProcessSpec::geometric_brownian(), 0.5, 1.0),
              std::exp(0.75) * (std::exp(0.5) - 1.0), 1e-15);
}

TEST(Processes, KernelSymmetry) {
  NormalSampler rng(17);
  for (const ProcessSpec& spec : kAllSpecs) {
    for (int k = 0; k < 50; ++k) {
      double s = rng.uniform01() * 0.99 + 0.01;
      double t = rng.uniform01() * 0.99 + 0.01;
      EXPECT_NEAR(cov_kernel(spec, s, t), cov_kernel(spec, t, s), 1e-15) << spec.label();
    }
  }
}

TEST(Processes, FbmHalfIsBrownian) {
  Grid grid = Grid::equispaced(50);
  ProcessSpec fbm = ProcessSpec::fractional_brownian(0.5);
  for (std::size_t i = 0; i < 50; i += 3)
    for (std::size_t j = 0; j < 50; j += 7)
      EXPECT_NEAR(cov_kernel(fbm, grid.times[i], grid.times[j]),
                  cov_kernel(ProcessSpec::brownian(), grid.times[i], grid.times[j]), 1e-12);
}

TEST(Processes, SampleCovarianceMatchesKernel) {
  Grid grid = Grid::equispaced(20);
  const std::size_t n = 2000;
  Matrix paths = sample_paths(ProcessSpec::brownian(), grid, n, 2024);
  // grid times 0.05..1.00; 0.25 and 0.75 sit at indices 4 and 14
  ASSERT_NEAR(grid.times[4], 0.25, 1e-15);
  ASSERT_NEAR(grid.times[14], 0.75, 1e-15);
  double m4 = 0.0, m14 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m4 += paths(i, 4);
    m14 += paths(i, 14);
  }
  m4 /= n;
  m14 /= n;
  double c = 0.0;
  for (std::size_t i = 0; i < n; ++i) c += (paths(i, 4) - m4) * (paths(i, 14) - m14);
  c /= n;
  double se = std::sqrt((0.25 * 0.75 + 0.25 * 0.25) / n);
  EXPECT_NEAR(c, 0.25, 3.0 * se);
}

TEST(Processes, SampleMeanMatchesMeanFn) {
  Grid grid = Grid::equispaced(10);
  const std::size_t n = 5000;
  for (const ProcessSpec& spec : {ProcessSpec::ornstein_uhlenbeck(), ProcessSpec::brownian()}) {
    Matrix paths = sample_paths(spec, grid, n, 31);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) m += paths(i, j);
      m /= n;
      double se = std::sqrt(cov_kernel(spec, grid.times[j], grid.times[j]) / n);
      EXPECT_NEAR(m, mean_fn(spec, grid.times[j]), 4.0 * se) << spec.label() << " t=" << grid.times[j];
    }
  }
}

TEST(Processes, SamplingDeterministicInSeed) {
  Grid grid = Grid::equispaced(25);
  for (const ProcessSpec& spec : kAllSpecs) {
    Matrix a = sample_paths(spec, grid, 1, 5);
    Matrix b = sample_paths(spec, grid, 1, 5);
    Matrix c = sample_paths(spec, grid, 1, 6);
    EXPECT_EQ(a.data(), b.data()) << spec.label();
    EXPECT_NE(a.data(), c.data()) << spec.label();
  }
}

TEST(Processes, GeometricBrownianPositive) {
  Grid grid = Grid::equispaced(30);
  Matrix paths = sample_paths(ProcessSpec::geometric_brownian(), grid, 200, 9);
  for (double v : paths.data()) EXPECT_GT(v, 0.0);
}

TEST(Processes, SpecValidation) {
  Grid grid = Grid::equispaced(10);
  ProcessSpec no_hurst{ProcessKind::fractional_brownian, {}, {}};
  EXPECT_THROW(sample_paths(no_hurst, grid, 1, 1), DataError);
  ProcessSpec stray_hurst{ProcessKind::brownian, 0.5, {}};
  EXPECT_THROW(sample_paths(stray_hurst, grid, 1, 1), DataError);
  EXPECT_THROW(ProcessSpec::fractional_brownian(1.2).validate(), DataError);
}

TEST(Responses, Model1OnIdentityPath) {
  // X(t) = t makes Y = 2*0.2 - 5*0.4 + 0.9 = -0.7 exactly at sigma = 0.
  Grid grid = Grid::equispaced(100);
  Matrix x(1, 100);
  for (std::size_t j = 0; j < 100; ++j) x(0, j) = grid.times[j];
  RegressionModelSpec model = RegressionModelSpec::model1(0.0);
  std::vector<double> y = gen_response(model, x, grid, 1);
  ASSERT_EQ(y.size(), 1u);
  EXPECT_NEAR(y[0], -0.7, 1e-12);
}

TEST(Responses, Model3OnConstantPath) {
  // X == 1 integrates log(1+t) over [0,1]: 2 log 2 - 1.
  Grid grid = Grid::equispaced(100);
  Matrix x(1, 100, 1.0);
  RegressionModelSpec model = RegressionModelSpec::model3(0.0);
  std::vector<double> y = gen_response(model, x, grid, 1);
  EXPECT_NEAR(y[0], 2.0 * std::log(2.0) - 1.0, 1e-3);
}

TEST(Responses, SigmaZeroLinearity) {
  Grid grid = Grid::equispaced(100);
  Matrix x = sample_paths(ProcessSpec::brownian(), grid, 5, 77);
  Matrix x2 = x;
  for (double& v : x2.data()) v *= 2.0;
  for (int id = 1; id <= 3; ++id) {
    RegressionModelSpec model = id == 1   ? RegressionModelSpec::model1(0.0)
                                : id == 2 ? RegressionModelSpec::model2(0.0)
                                          : RegressionModelSpec::model3(0.0);
    std::vector<double> y1 = gen_response(model, x, grid, 1);
    std::vector<double> y2 = gen_response(model, x2, grid, 1);
    for (std::size_t i = 0; i < y1.size(); ++i)
      EXPECT_NEAR(y2[i], 2.0 * y1[i], 1e-12 * (1.0 + std::abs(y1[i]))) << "model " << id;
  }
}

TEST(Responses, DeterministicInSeed) {
  Grid grid = Grid::equispaced(50);
  Matrix x = sample_paths(ProcessSpec::brownian(), grid, 10, 3);
  RegressionModelSpec model = RegressionModelSpec::model1(0.2);
  EXPECT_EQ(gen_response(model, x, grid, 4), gen_response(model, x, grid, 4));
  EXPECT_NE(gen_response(model, x, grid, 4), gen_response(model, x, grid, 5));
}

TEST(Responses, OffGridTruePointRejected) {
  // Grid times are 0.1..1.0; 0.01 is more than half a step from all of them,
  // while 0.123 snaps to 0.1.
  Grid grid = Grid::equispaced(10);
  Matrix x(2, 10, 1.0);
  RegressionModelSpec model{1, {0.01}, {1.0}, 0.0};
  EXPECT_THROW(gen_response(model, x, grid, 1), DataError);
  RegressionModelSpec snapped{1, {0.123}, {1.0}, 0.0};
  EXPECT_NO_THROW(gen_response(snapped, x, grid, 1));
  RegressionModelSpec ok{1, {0.2}, {1.0}, 0.0};
  EXPECT_NO_THROW(gen_response(ok, x, grid, 1));
}

TEST(Responses, Model2Variants) {
  RegressionModelSpec display = RegressionModelSpec::model2();
  RegressionModelSpec text = RegressionModelSpec::model2(0.2, true);
  EXPECT_DOUBLE_EQ(display.true_points[2], 0.67);
  EXPECT_DOUBLE_EQ(text.true_points[2], 0.6);
  EXPECT_EQ(display.true_weights, text.true_weights);
  EXPECT_EQ(display.true_points.size(), 5u);
}
