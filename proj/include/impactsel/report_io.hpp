#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "impactsel/bench.hpp"
#include "impactsel/errors.hpp"

namespace impactsel {

using nlohmann::json;

// --- process / model / config <-> JSON ---

inline json to_json(const ProcessSpec& spec) {
  json j{{"kind", ""}};
  switch (spec.kind) {
    case ProcessKind::brownian: j["kind"] = "bm"; break;
    case ProcessKind::geometric_brownian: j["kind"] = "gbm"; break;
    case ProcessKind::integrated_brownian: j["kind"] = "ibm"; break;
    case ProcessKind::ornstein_uhlenbeck:
      j["kind"] = "ou";
      j["ou"] = {{"theta", spec.ou->theta}, {"mu", spec.ou->mu}, {"sigma", spec.ou->sigma}};
      break;
    case ProcessKind::fractional_brownian:
      j["kind"] = "fbm";
      j["hurst"] = *spec.hurst;
      break;
  }
  return j;
}

inline ProcessSpec process_from_json(const json& j) {
  std::string kind = j.is_string() ? j.get<std::string>() : j.at("kind").get<std::string>();
  if (kind == "bm") return ProcessSpec::brownian();
  if (kind == "gbm") return ProcessSpec::geometric_brownian();
  if (kind == "ibm") return ProcessSpec::integrated_brownian();
  if (kind == "ou") {
    OuParams p;
    if (j.is_object() && j.contains("ou")) {
      const json& o = j["ou"];
      p.theta = o.value("theta", 1.0);
      p.mu = o.value("mu", 1.0);
      p.sigma = o.value("sigma", 1.0);
    }
    return ProcessSpec::ornstein_uhlenbeck(p);
  }
  if (kind == "fbm") {
    if (!j.is_object() || !j.contains("hurst"))
      throw DataError("process kind fbm needs a hurst value");
    return ProcessSpec::fractional_brownian(j["hurst"].get<double>());
  }
  throw DataError("unknown process kind '" + kind + "'");
}

inline json to_json(const RegressionModelSpec& model) {
  return {{"id", model.model_id},
          {"true_points", model.true_points},
          {"true_weights", model.true_weights},
          {"noise_sigma", model.noise_sigma}};
}

inline RegressionModelSpec model_from_json(const json& j) {
  int id = j.is_number_integer() ? j.get<int>() : j.at("id").get<int>();
  double sigma = j.is_object() ? j.value("noise_sigma", 0.2) : 0.2;
  RegressionModelSpec model;
  switch (id) {
    case 1: model = RegressionModelSpec::model1(sigma); break;
    case 2:
      model = RegressionModelSpec::model2(sigma, j.is_object() &&
                                                     j.value("variant", "display") == "text");
      break;
    case 3: model = RegressionModelSpec::model3(sigma); break;
    default: throw DataError("unknown model id " + std::to_string(id));
  }
  if (j.is_object() && j.contains("true_points")) {
    model.true_points = j["true_points"].get<std::vector<double>>();
    model.true_weights = j.at("true_weights").get<std::vector<double>>();
  }
  model.validate();
  return model;
}

inline json to_json(const SelectionConstraints& cons) {
  json j{{"max_p", cons.max_p}};
  j["delta"] = cons.delta ? json(*cons.delta) : json(nullptr);
  j["denom_tol"] = cons.denom_tol ? json(*cons.denom_tol) : json(nullptr);
  return j;
}

inline SelectionConstraints constraints_from_json(const json& j) {
  SelectionConstraints cons;
  cons.max_p = j.value("max_p", std::size_t{10});
  if (j.contains("delta") && !j["delta"].is_null()) cons.delta = j["delta"].get<double>();
  if (j.contains("denom_tol") && !j["denom_tol"].is_null())
    cons.denom_tol = j["denom_tol"].get<double>();
  return cons;
}

inline json to_json(const ExperimentConfig& config) {
  return {{"process", to_json(config.process)},
          {"model", to_json(config.model)},
          {"n_train", config.n_train},
          {"n_test", config.n_test},
          {"grid_size", config.grid_size},
          {"reps", config.reps},
          {"constraints", to_json(config.constraints)},
          {"order_method", to_string(config.order_method)},
          {"rho", config.rho},
          {"base_seed", config.base_seed},
          {"table_scale", config.table_scale}};
}

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig config;
  if (j.contains("process")) config.process = process_from_json(j["process"]);
  if (j.contains("model")) config.model = model_from_json(j["model"]);
  config.n_train = j.value("n_train", std::size_t{100});
  config.n_test = j.value("n_test", std::size_t{50});
  config.grid_size = j.value("grid_size", std::size_t{100});
  config.reps = j.value("reps", std::size_t{100});
  if (j.contains("constraints")) config.constraints = constraints_from_json(j["constraints"]);
  config.order_method = order_method_from_string(j.value("order_method", std::string("kmeans")));
  config.rho = j.value("rho", 0.01);
  config.base_seed = j.value("base_seed", std::uint64_t{12345});
  config.table_scale = j.value("table_scale", 1.0);
  config.validate();
  return config;
}

// A benchmark config whose "process" is an array expands into one experiment
// per process, all other settings shared.
inline std::vector<ExperimentConfig> benchmark_configs_from_json(const json& j) {
  std::vector<ExperimentConfig> configs;
  if (j.contains("process") && j["process"].is_array()) {
    for (const json& p : j["process"]) {
      json one = j;
      one["process"] = p;
      configs.push_back(config_from_json(one));
    }
  } else {
    configs.push_back(config_from_json(j));
  }
  return configs;
}

// --- records / reports <-> JSON ---

inline json to_json(const RepRecord& rec) {
  json j{{"rep", rec.rep},
         {"rmse", rec.rmse},
         {"p_hat", rec.p_hat},
         {"selected_times", rec.selected_times},
         {"wall_time_s", rec.wall_time_s}};
  if (rec.hausdorff) j["hausdorff"] = *rec.hausdorff;
  if (rec.p_star) j["p_star"] = *rec.p_star;
  if (!rec.warnings.empty()) j["warnings"] = rec.warnings;
  if (!rec.error.empty()) j["error"] = rec.error;
  return j;
}

inline RepRecord record_from_json(const json& j) {
  RepRecord rec;
  rec.rep = j.at("rep").get<std::size_t>();
  rec.rmse = j.value("rmse", 0.0);
  rec.p_hat = j.value("p_hat", std::size_t{0});
  rec.selected_times = j.value("selected_times", std::vector<double>{});
  rec.wall_time_s = j.value("wall_time_s", 0.0);
  if (j.contains("hausdorff")) rec.hausdorff = j["hausdorff"].get<double>();
  if (j.contains("p_star")) rec.p_star = j["p_star"].get<std::size_t>();
  rec.warnings = j.value("warnings", std::vector<std::string>{});
  rec.error = j.value("error", std::string{});
  return rec;
}

inline json to_json(const Aggregate& agg) { return {{"mean", agg.mean}, {"sd", agg.sd}}; }

inline Aggregate aggregate_from_json(const json& j) {
  return {j.at("mean").get<double>(), j.at("sd").get<double>()};
}

inline json to_json(const ExperimentReport& report) {
  json aggregates{{"rmse", to_json(report.rmse)}, {"p_hat", to_json(report.p_hat)}};
  if (report.hausdorff) aggregates["hausdorff"] = to_json(*report.hausdorff);
  json records = json::array();
  for (const auto& r : report.records) records.push_back(to_json(r));
  return {{"version", report.version},
          {"config", to_json(report.config)},
          {"records", records},
          {"failed", report.failed},
          {"aggregates", aggregates}};
}

inline ExperimentReport report_from_json(const json& j) {
  ExperimentReport report;
  report.version = j.at("version").get<std::string>();
  report.config = config_from_json(j.at("config"));
  for (const json& r : j.at("records")) report.records.push_back(record_from_json(r));
  report.failed = j.value("failed", std::size_t{0});
  const json& agg = j.at("aggregates");
  report.rmse = aggregate_from_json(agg.at("rmse"));
  report.p_hat = aggregate_from_json(agg.at("p_hat"));
  if (agg.contains("hausdorff")) report.hausdorff = aggregate_from_json(agg["hausdorff"]);
  return report;
}

inline json to_json(const SelectionReport& rep) {
  return {{"selected_indices", rep.selected_indices},
          {"selected_times", rep.selected_times},
          {"qmax_series", rep.qmax_series},
          {"log_gaps", rep.log_gaps},
          {"p_hat", rep.p_hat},
          {"order_method", rep.order_method},
          {"coefficients", rep.coefficients},
          {"intercept", rep.intercept},
          {"warnings", rep.warnings}};
}

inline SelectionReport selection_report_from_json(const json& j) {
  SelectionReport rep;
  rep.selected_indices = j.at("selected_indices").get<std::vector<std::size_t>>();
  rep.selected_times = j.at("selected_times").get<std::vector<double>>();
  rep.qmax_series = j.value("qmax_series", std::vector<double>{});
  rep.log_gaps = j.value("log_gaps", std::vector<double>{});
  rep.p_hat = j.at("p_hat").get<std::size_t>();
  rep.order_method = j.value("order_method", std::string{});
  rep.coefficients = j.at("coefficients").get<std::vector<double>>();
  rep.intercept = j.at("intercept").get<double>();
  rep.warnings = j.value("warnings", std::vector<std::string>{});
  return rep;
}

// --- file helpers ---

namespace detail {

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DataError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace detail

inline void write_report(const ExperimentReport& report, const std::string& path) {
  detail::write_json_file(to_json(report), path);
}

inline ExperimentReport read_report(const std::string& path) {
  return report_from_json(detail::load_json_file(path));
}

// --- table export ---

namespace detail {

inline std::string format_scale(double scale) {
  double e = std::log10(scale);
  double re = std::round(e);
  char buf[32];
  if (std::abs(e - re) < 1e-12)
    std::snprintf(buf, sizeof(buf), "1e%+d", static_cast<int>(re));
  else
    std::snprintf(buf, sizeof(buf), "%g", scale);
  return buf;
}

inline std::string mean_sd_cell(const Aggregate& agg, double scale) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g (%.4g)", agg.mean / scale, agg.sd / scale);
  return buf;
}

}  // namespace detail

// One row per experiment, cells formatted "mean (sd)" like the benchmark
// tables. table_scale (from the first config) divides the rmse column and is
// annotated in its header; hausdorff and p_hat stay unscaled.
inline void write_table_csv(const std::vector<ExperimentReport>& reports,
                            const std::string& path) {
  if (reports.empty()) throw DataError("no reports to tabulate");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  const double scale = reports.front().config.table_scale;
  out << "process,rmse mean (sd)";
  if (scale != 1.0) out << " [scale " << detail::format_scale(scale) << "]";
  out << ",hausdorff mean (sd),p_hat mean (sd)\n";
  for (const auto& report : reports) {
    out << report.config.process.label() << ',' << detail::mean_sd_cell(report.rmse, scale) << ',';
    if (report.hausdorff)
      out << detail::mean_sd_cell(*report.hausdorff, 1.0);
    else
      out << '-';
    out << ',' << detail::mean_sd_cell(report.p_hat, 1.0) << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace impactsel
