// Command line front end: simulate benchmark datasets, select impact points,
// predict from a saved selection, and run full benchmark experiments.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "impactsel/impactsel.hpp"

namespace {

using namespace impactsel;

ProcessSpec make_process(const std::string& kind, double hurst, bool hurst_set,
                         const OuParams& ou) {
  if (kind == "bm") return ProcessSpec::brownian();
  if (kind == "gbm") return ProcessSpec::geometric_brownian();
  if (kind == "ibm") return ProcessSpec::integrated_brownian();
  if (kind == "ou") return ProcessSpec::ornstein_uhlenbeck(ou);
  if (kind == "fbm") {
    if (!hurst_set) throw DataError("--hurst is required for --process fbm");
    return ProcessSpec::fractional_brownian(hurst);
  }
  throw DataError("unknown process '" + kind + "'");
}

RegressionModelSpec make_model(int id, double sigma, const std::string& model2_variant) {
  switch (id) {
    case 1: return RegressionModelSpec::model1(sigma);
    case 2: return RegressionModelSpec::model2(sigma, model2_variant == "text");
    case 3: return RegressionModelSpec::model3(sigma);
    default: throw DataError("model must be 1, 2, or 3");
  }
}

std::string sibling_csv_path(const std::string& json_path) {
  std::size_t dot = json_path.find_last_of('.');
  std::size_t slash = json_path.find_last_of('/');
  std::string csv = (dot == std::string::npos || (slash != std::string::npos && dot < slash))
                        ? json_path + ".csv"
                        : json_path.substr(0, dot) + ".csv";
  return csv == json_path ? json_path + ".table.csv" : csv;
}

int run(int argc, char** argv) {
  CLI::App app{"Impact point selection for scalar-on-function regression"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Sample paths and responses to a dataset CSV");
  std::string sim_process;
  double sim_hurst = 0.5;
  OuParams sim_ou;
  std::size_t sim_n = 150, sim_grid = 100;
  int sim_model = 1;
  double sim_sigma = 0.2;
  std::uint64_t sim_seed = 1;
  std::string sim_variant = "display";
  std::string sim_out;
  sim->add_option("--process", sim_process, "Process kind: bm, gbm, ibm, ou, fbm")->required();
  auto* hurst_opt = sim->add_option("--hurst", sim_hurst, "Hurst exponent (fbm only)");
  sim->add_option("--ou-theta", sim_ou.theta, "OU mean reversion rate")->capture_default_str();
  sim->add_option("--ou-mu", sim_ou.mu, "OU long-run mean")->capture_default_str();
  sim->add_option("--ou-sigma", sim_ou.sigma, "OU diffusion scale")->capture_default_str();
  sim->add_option("--n", sim_n, "Number of trajectories")->capture_default_str();
  sim->add_option("--grid", sim_grid, "Grid size m (times i/m)")->capture_default_str();
  sim->add_option("--model", sim_model, "Response model: 1, 2, or 3")->capture_default_str();
  sim->add_option("--sigma", sim_sigma, "Response noise sd")->capture_default_str();
  sim->add_option("--model2-variant", sim_variant, "Model 2 points: display or text")
      ->check(CLI::IsMember({"display", "text"}))
      ->capture_default_str();
  sim->add_option("--seed", sim_seed, "Random seed")->capture_default_str();
  sim->add_option("--out", sim_out, "Output dataset CSV path")->required();

  // select
  auto* sel = app.add_subcommand("select", "Select impact points from a dataset CSV");
  std::string sel_input, sel_out;
  std::size_t sel_max_p = 10;
  double sel_delta = -1.0, sel_denom_tol = -1.0, sel_rho = 0.01;
  std::string sel_order = "kmeans";
  sel->add_option("--input", sel_input, "Dataset CSV path")->required();
  sel->add_option("--max-p", sel_max_p, "Maximum number of points")->capture_default_str();
  auto* delta_opt = sel->add_option("--delta", sel_delta, "Min time separation (default: one grid step)");
  auto* tol_opt = sel->add_option("--denom-tol", sel_denom_tol,
                                  "Redundancy tolerance (default: 1e-10 x max variance)");
  sel->add_option("--order", sel_order, "Order estimator: kmeans or threshold")
      ->check(CLI::IsMember({"kmeans", "threshold"}))
      ->capture_default_str();
  sel->add_option("--rho", sel_rho, "Threshold fraction of Qmax(1)")->capture_default_str();
  sel->add_option("--out", sel_out, "Output selection report JSON path")->required();

  // predict
  auto* prd = app.add_subcommand("predict", "Predict responses with a saved selection report");
  std::string prd_model, prd_input, prd_out;
  prd->add_option("--model", prd_model, "Selection report JSON path")->required();
  prd->add_option("--input", prd_input, "Dataset CSV path")->required();
  prd->add_option("--out", prd_out, "Output predictions CSV path")->required();

  // benchmark
  auto* bch = app.add_subcommand("benchmark", "Run seeded benchmark experiments from a config");
  std::string bch_config, bch_out;
  std::size_t bch_reps = 0;
  unsigned bch_jobs = 1;
  bch->add_option("--config", bch_config, "Experiment config JSON path")->required();
  bch->add_option("--reps", bch_reps, "Override replication count");
  bch->add_option("--jobs", bch_jobs, "Worker threads")->capture_default_str();
  bch->add_option("--out", bch_out, "Output report JSON path (table CSV written alongside)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (sim->parsed()) {
    ProcessSpec process = make_process(sim_process, sim_hurst, hurst_opt->count() > 0, sim_ou);
    RegressionModelSpec model = make_model(sim_model, sim_sigma, sim_variant);
    Grid grid = Grid::equispaced(sim_grid);
    Matrix paths = sample_paths(process, grid, sim_n, derive_seed(sim_seed, 1));
    std::vector<double> y = gen_response(model, paths, grid, derive_seed(sim_seed, 2));
    Dataset data = Dataset::create(grid, std::move(paths), std::move(y));
    write_dataset_csv(data, sim_out);
    std::cout << "wrote " << data.n() << " trajectories on " << data.m() << " grid points to "
              << sim_out << "\n";
  } else if (sel->parsed()) {
    std::string note;
    Dataset data = load_dataset_csv(sel_input, &note);
    SelectionConstraints cons;
    cons.max_p = sel_max_p;
    if (delta_opt->count() > 0) cons.delta = sel_delta;
    if (tol_opt->count() > 0) cons.denom_tol = sel_denom_tol;
    SelectionReport report =
        select_on_dataset(data, cons, order_method_from_string(sel_order), sel_rho);
    if (!note.empty()) report.warnings.push_back(note);
    detail::write_json_file(to_json(report), sel_out);
    std::cout << "selected " << report.p_hat << " points";
    for (double t : report.selected_times) std::cout << ' ' << t;
    std::cout << "; report written to " << sel_out << "\n";
  } else if (prd->parsed()) {
    SelectionReport model = selection_report_from_json(detail::load_json_file(prd_model));
    Dataset data = load_dataset_csv(prd_input);
    LinearPredictor pred;
    pred.coefficients = model.coefficients;
    pred.intercept = model.intercept;
    pred.times = model.selected_times;
    for (double t : model.selected_times) {
      std::size_t idx = data.grid.nearest_index(t);
      if (std::abs(data.grid.times[idx] - t) > 1e-9)
        throw DataError("selected time " + std::to_string(t) + " is not on the input grid");
      pred.indices.push_back(idx);
    }
    std::vector<double> yhat = predict(pred, data);
    write_predictions_csv(yhat, prd_out);
    std::cout << "wrote " << yhat.size() << " predictions to " << prd_out << "\n";
  } else if (bch->parsed()) {
    json config_json = detail::load_json_file(bch_config);
    if (bch_reps > 0) config_json["reps"] = bch_reps;
    std::vector<ExperimentConfig> configs = benchmark_configs_from_json(config_json);
    std::vector<ExperimentReport> reports;
    for (const ExperimentConfig& config : configs) {
      reports.push_back(run_experiment(config, bch_jobs));
      const ExperimentReport& r = reports.back();
      std::cout << r.config.process.label() << " model " << r.config.model.model_id << ": rmse "
                << r.rmse.mean << " (" << r.rmse.sd << "), p_hat " << r.p_hat.mean;
      if (r.hausdorff) std::cout << ", hausdorff " << r.hausdorff->mean;
      std::cout << ", failed " << r.failed << "/" << r.config.reps << "\n";
    }
    if (reports.size() == 1) {
      write_report(reports.front(), bch_out);
    } else {
      json suite{{"version", kVersion}, {"reports", json::array()}};
      for (const auto& r : reports) suite["reports"].push_back(to_json(r));
      detail::write_json_file(suite, bch_out);
    }
    std::string csv_path = sibling_csv_path(bch_out);
    write_table_csv(reports, csv_path);
    std::cout << "report written to " << bch_out << ", table to " << csv_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const impactsel::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const impactsel::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
