#pragma once

// Command-line front end. Kept in a header so the test suite can drive the
// same entry point as the `brt` binary.
//
// Exit codes: 0 success, 1 runtime or model error, 2 usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "brt/brt.hpp"
#include "brt/svg.hpp"

namespace brt::cli {

// Usage problem detected after parsing (unknown feature, identical pair).
class UsageError : public Error {
 public:
  using Error::Error;
};

struct BoostFlags {
  BoostConfig config;
  std::size_t stride = 0;  // 0 -> default_stage_stride
};

struct DataFlags {
  std::string schema = "food-inflation";
  std::string response = "FCPI";

  TableSchema table_schema() const {
    return schema == "open" ? TableSchema::open(response) : TableSchema::food_inflation();
  }
};

inline void add_boost_flags(CLI::App& app, BoostFlags& f) {
  app.add_option("--trees", f.config.n_trees, "Number of boosting stages")->capture_default_str();
  app.add_option("--learn-rate", f.config.learn_rate, "Shrinkage applied to every stage")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--max-nodes", f.config.max_nodes, "Total nodes per tree (internal + leaves)")
      ->check(CLI::Range(std::size_t{3}, std::size_t{1} << 20))
      ->capture_default_str();
  app.add_option("--min-leaf", f.config.min_leaf_obs, "Minimum learn records per leaf")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20))
      ->capture_default_str();
  app.add_option("--subsample", f.config.subsample_fraction, "Share of rows drawn per stage")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--seed", f.config.seed, "Seed of the subsampling stream")->capture_default_str();
  app.add_option("--stride", f.stride, "Stage stride of the staged MSE curve (default M/500)");
}

inline void add_data_flags(CLI::App& app, DataFlags& f) {
  app.add_option("--schema", f.schema, "Model-table schema: food-inflation or open")
      ->check(CLI::IsMember({"food-inflation", "open"}))
      ->capture_default_str();
  app.add_option("--response", f.response, "Response column (open schema)")->capture_default_str();
}

inline std::filesystem::path ensure_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline std::string fixed5(const std::optional<double>& v) {
  if (!v) return "undefined";
  std::string s = format_fixed(*v, 5);
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);  // "-0.00000"
  return s;
}

inline std::string csv_opt(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("NA");
}

inline std::string metrics_csv(const FitReport& r) {
  std::ostringstream out;
  out << "metric,value\n";
  out << "n," << r.n << '\n';
  out << "mse," << format_double(r.mse) << '\n';
  out << "mad," << format_double(r.mad) << '\n';
  out << "r_squared," << csv_opt(r.r_squared) << '\n';
  out << "roc_auc," << csv_opt(r.roc_auc) << '\n';
  return out.str();
}

inline void print_fit_report(std::ostream& out, const FitReport& r) {
  out << "BRT model error measures (" << r.n << " records)\n";
  out << "  MSE   (mean squared error)       " << format_fixed(r.mse, 5) << '\n';
  out << "  MAD   (mean absolute deviation)  " << format_fixed(r.mad, 5) << '\n';
  out << "  R-sq  (R-squared)                " << fixed5(r.r_squared) << '\n';
  out << "  ROC   (area under curve)         " << fixed5(r.roc_auc) << '\n';
}

// Learn rows with a response, as parallel actual/predicted vectors.
inline std::pair<std::vector<double>, std::vector<double>> fitted_pairs(const BoostedModel& model,
                                                                        const Dataset& data) {
  const std::vector<double> pred = model.predict_batch(data.features);
  std::vector<double> actual;
  std::vector<double> predicted;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (is_missing(data.response[i])) continue;
    actual.push_back(data.response[i]);
    predicted.push_back(pred[i]);
  }
  return {actual, predicted};
}

inline void check_features_match(const BoostedModel& model, const Dataset& data) {
  if (model.feature_names() == data.feature_names) return;
  std::vector<std::string> only_model;
  std::vector<std::string> only_data;
  for (const auto& n : model.feature_names()) {
    if (std::find(data.feature_names.begin(), data.feature_names.end(), n) == data.feature_names.end()) {
      only_model.push_back(n);
    }
  }
  for (const auto& n : data.feature_names) {
    if (std::find(model.feature_names().begin(), model.feature_names().end(), n) ==
        model.feature_names().end()) {
      only_data.push_back(n);
    }
  }
  std::string msg = "feature mismatch between model and data;";
  if (only_model.empty() && only_data.empty()) msg += " same names in a different order;";
  if (!only_model.empty()) {
    msg += " only in model:";
    for (const auto& n : only_model) msg += " " + n;
    msg += ";";
  }
  if (!only_data.empty()) {
    msg += " only in data:";
    for (const auto& n : only_data) msg += " " + n;
    msg += ";";
  }
  msg.pop_back();
  throw Error(msg);
}

inline std::size_t feature_by_name(const Dataset& data, const std::string& name) {
  const std::size_t j = data.feature_index(name);
  if (j != Dataset::npos) return j;
  std::string msg = "unknown feature '" + name + "'; valid names:";
  for (const auto& n : data.feature_names) msg += " " + n;
  throw UsageError(msg);
}

inline BoostedModel load_model_reporting(const std::string& path, std::ostream& err) {
  std::vector<std::string> warnings;
  BoostedModel model = load_model_file(path, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return model;
}

// --- train ---------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string out = ".";
  std::string roc = "median";
  BoostFlags boost;
  DataFlags data_flags;
};

inline int run_train(const TrainArgs& a, std::ostream& out) {
  const Dataset data = load_model_table_file(a.data, a.data_flags.table_schema());
  const auto dir = ensure_dir(a.out);
  const auto t0 = std::chrono::steady_clock::now();
  const BoostedModel model = fit_ensemble(data, a.boost.config);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  save_model_file(model, (dir / "model.brtm").string());

  const auto [actual, predicted] = fitted_pairs(model, data);
  const FitReport report = fit_report(actual, predicted, RocThreshold::parse(a.roc));
  write_text(dir / "metrics.csv", metrics_csv(report));

  {
    const std::vector<double> pred = model.predict_batch(data.features);
    std::ostringstream csv;
    csv << "year,actual,predicted\n";
    std::vector<double> xs;
    for (std::size_t i = 0; i < data.rows(); ++i) {
      const double key = data.years.empty() ? static_cast<double>(i + 1) : data.years[i];
      xs.push_back(key);
      csv << (data.years.empty() ? static_cast<int>(i + 1) : data.years[i]) << ','
          << format_double(data.response[i]) << ',' << format_double(pred[i]) << '\n';
    }
    write_text(dir / "predictions.csv", csv.str());
    write_text(dir / "predictions.svg",
               svg::line_chart("Model predictions vs actual " + data.response_name, "year",
                               data.response_name,
                               {{"actual", xs, data.response, "#333333", true},
                                {"predicted", xs, pred, "#d62728", true}}));
  }

  const std::size_t stride = a.boost.stride > 0 ? a.boost.stride
                                                : default_stage_stride(model.stages().size());
  const StagedCurve curve = staged_metric(model, data, StagedMetricKind::mse, stride);
  {
    std::ostringstream csv;
    csv << "n_trees,mse\n";
    std::vector<double> xs;
    std::vector<double> ys;
    for (const StagedPoint& p : curve.points) {
      csv << p.n_trees << ',' << format_double(p.value) << '\n';
      xs.push_back(static_cast<double>(p.n_trees));
      ys.push_back(p.value);
    }
    write_text(dir / "staged_mse.csv", csv.str());
    write_text(dir / "staged_mse.svg",
               svg::line_chart("Training MSE by number of trees", "trees", "MSE",
                               {{"mse", xs, ys, "#1f77b4", false}}));
  }

  const BoostConfig& c = model.config();
  out << "trained " << c.n_trees << " trees (learn rate " << format_double(c.learn_rate)
      << ", max nodes " << c.max_nodes << ", min leaf " << c.min_leaf_obs << ", subsample "
      << format_double(c.subsample_fraction) << ", seed " << c.seed << ") on " << data.rows()
      << " records in " << format_fixed(seconds, 2) << " s\n";
  print_fit_report(out, report);
  out << "wrote " << (dir / "model.brtm").string() << '\n';
  return 0;
}

// --- evaluate ------------------------------------------------------------

struct EvalArgs {
  std::string model;
  std::string data;
  std::string out;
  std::string roc = "median";
  DataFlags data_flags;
};

inline int run_evaluate(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const BoostedModel model = load_model_reporting(a.model, err);
  const Dataset data = load_model_table_file(a.data, a.data_flags.table_schema());
  check_features_match(model, data);
  const auto [actual, predicted] = fitted_pairs(model, data);
  const FitReport report = fit_report(actual, predicted, RocThreshold::parse(a.roc));
  print_fit_report(out, report);
  if (!a.out.empty()) write_text(ensure_dir(a.out) / "metrics.csv", metrics_csv(report));
  return 0;
}

// --- report / interact -----------------------------------------------------

struct ReportArgs {
  std::string model;
  std::string data;
  std::string out = ".";
  std::size_t top = 0;  // 0 -> every pair
  std::string denominator = "model";
  DataFlags data_flags;
};

inline void write_interactions(const InteractionReport& r, const ReportArgs& a,
                               const std::filesystem::path& dir, std::ostream& out) {
  std::vector<PairScore> ranked = r.ranked_pairs();
  if (a.top > 0 && ranked.size() > a.top) ranked.resize(a.top);
  std::ostringstream pairs;
  pairs << "predictor_1,predictor_2,score\n";
  out << "Pairwise interaction score (percent)\n";
  for (const PairScore& p : ranked) {
    pairs << r.feature_names[p.j] << ',' << r.feature_names[p.k] << ',' << format_double(p.score) << '\n';
    out << "  " << r.feature_names[p.j] << " x " << r.feature_names[p.k] << "  "
        << format_fixed(p.score, 2) << '\n';
  }
  write_text(dir / "pairwise_interactions.csv", pairs.str());

  std::vector<std::size_t> order(r.overall.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return r.overall[x] > r.overall[y]; });
  std::ostringstream overall;
  overall << "predictor,score\n";
  std::vector<std::string> labels;
  std::vector<double> values;
  out << "Overall interaction strength (percent)\n";
  for (std::size_t j : order) {
    overall << r.feature_names[j] << ',' << format_double(r.overall[j]) << '\n';
    out << "  " << r.feature_names[j] << "  " << format_fixed(r.overall[j], 2) << '\n';
    labels.push_back(r.feature_names[j]);
    values.push_back(r.overall[j]);
  }
  write_text(dir / "overall_interactions.csv", overall.str());
  write_text(dir / "overall_interactions.svg",
             svg::bar_chart("Overall interaction strength", "percent", labels, values));
}

inline InteractionDenominator parse_denominator(const std::string& s) {
  return s == "response" ? InteractionDenominator::response : InteractionDenominator::model;
}

inline int run_report(const ReportArgs& a, bool with_importance, std::ostream& out,
                      std::ostream& err) {
  const BoostedModel model = load_model_reporting(a.model, err);
  const Dataset data = load_model_table_file(a.data, a.data_flags.table_schema());
  check_features_match(model, data);
  const auto dir = ensure_dir(a.out);

  if (with_importance) {
    const InfluenceReport inf = relative_influence(model);
    std::ostringstream csv;
    csv << "predictor,relative_influence\n";
    std::vector<std::string> labels;
    std::vector<double> values;
    out << "Relative influence (percent)\n";
    for (std::size_t j : inf.ranking()) {
      csv << inf.feature_names[j] << ',' << format_double(inf.percent[j]) << '\n';
      out << "  " << inf.feature_names[j] << "  " << format_fixed(inf.percent[j], 2) << '\n';
      labels.push_back(inf.feature_names[j]);
      values.push_back(inf.percent[j]);
    }
    write_text(dir / "importance.csv", csv.str());
    write_text(dir / "importance.svg",
               svg::bar_chart("Relative influence of predictors", "percent", labels, values));
  }

  const InteractionReport r = interaction_report(model, data, parse_denominator(a.denominator));
  write_interactions(r, a, dir, out);
  return 0;
}

// --- pdp -----------------------------------------------------------------

struct PdpArgs {
  std::string model;
  std::string data;
  std::string out = ".";
  std::string feature;
  std::string feature2;
  bool all = false;
  std::string grid = "observed";
  DataFlags data_flags;
};

inline void write_profile(const PDProfile& p, const Dataset& data, const std::filesystem::path& dir) {
  const std::string& name = data.feature_names[p.feature];
  std::ostringstream csv;
  csv << name << ",partial_dependence\n";
  for (std::size_t g = 0; g < p.grid.size(); ++g) {
    csv << format_double(p.grid[g]) << ',' << format_double(p.values[g]) << '\n';
  }
  write_text(dir / ("pdp_" + name + ".csv"), csv.str());
  write_text(dir / ("pdp_" + name + ".svg"),
             svg::line_chart("Partial dependence on " + name, name,
                             "centered " + data.response_name,
                             {{name, p.grid, p.values, "#1f77b4", true}}));
}

inline int run_pdp(const PdpArgs& a, std::ostream& out, std::ostream& err) {
  const BoostedModel model = load_model_reporting(a.model, err);
  const Dataset data = load_model_table_file(a.data, a.data_flags.table_schema());
  check_features_match(model, data);
  const GridSpec grid = GridSpec::parse(a.grid);
  const auto dir = ensure_dir(a.out);

  if (a.all) {
    for (std::size_t j = 0; j < data.n_features(); ++j) {
      write_profile(partial_dependence_1d(model, j, data, grid), data, dir);
      out << "wrote pdp_" << data.feature_names[j] << ".csv\n";
    }
    return 0;
  }
  if (a.feature.empty()) throw UsageError("pdp needs --feature or --all");
  const std::size_t j = feature_by_name(data, a.feature);
  if (a.feature2.empty()) {
    write_profile(partial_dependence_1d(model, j, data, grid), data, dir);
    out << "wrote pdp_" << a.feature << ".csv\n";
    return 0;
  }
  const std::size_t k = feature_by_name(data, a.feature2);
  if (j == k) throw UsageError("features must differ");
  const PDSurface s = partial_dependence_2d(model, j, k, data, grid);
  const std::string stem = "pdp_" + a.feature + "_" + a.feature2;
  std::ostringstream csv;
  csv << a.feature << ',' << a.feature2 << ",partial_dependence\n";
  for (std::size_t x = 0; x < s.grid_j.size(); ++x) {
    for (std::size_t y = 0; y < s.grid_k.size(); ++y) {
      csv << format_double(s.grid_j[x]) << ',' << format_double(s.grid_k[y]) << ','
          << format_double(s.at(x, y)) << '\n';
    }
  }
  write_text(dir / (stem + ".csv"), csv.str());
  write_text(dir / (stem + ".svg"),
             svg::heatmap("Partial dependence on " + a.feature + " and " + a.feature2, a.feature,
                          a.feature2, s.grid_j, s.grid_k, s.values));
  out << "wrote " << stem << ".csv\n";
  return 0;
}

// --- build-data ----------------------------------------------------------

struct BuildArgs {
  std::string raw_dir;
  std::string out = ".";
  int first_year = 1992;
  int last_year = 2016;
  int base_year = 2005;
  std::string msp_weights = "base";
  int monsoon_lag = 0;
};

inline int run_build_data(const BuildArgs& a, std::ostream& out) {
  const SeriesTable series = load_series_dir(a.raw_dir);
  AssemblyOptions opt;
  opt.first_year = a.first_year;
  opt.last_year = a.last_year;
  opt.base_year = a.base_year;
  opt.msp_weighting = a.msp_weights == "annual" ? MspWeighting::annual : MspWeighting::base_year;
  opt.monsoon_lag = a.monsoon_lag;
  const AssemblyResult result = assemble_model_table(series, opt);
  const auto dir = ensure_dir(a.out);
  std::ostringstream table;
  write_model_table(result.data, table);
  write_text(dir / "model_table.csv", table.str());
  std::ostringstream prov;
  write_provenance(result.provenance, prov);
  write_text(dir / "provenance.csv", prov.str());
  out << "built " << result.data.rows() << " rows (" << fy_label(result.data.years.front()) << "-"
      << fy_label(result.data.years.back()) << ")\n";
  out << "drought years:";
  for (int y : result.drought_years) out << ' ' << fy_label(y);
  out << '\n';
  return 0;
}

// --- sweep (performance vs tree size) ------------------------------------

struct SweepArgs {
  std::string data;
  std::string out = ".";
  std::size_t from = 3;
  std::size_t to = 8;
  BoostFlags boost;
  DataFlags data_flags;
};

inline int run_sweep(const SweepArgs& a, std::ostream& out) {
  if (a.from < 3 || a.to < a.from) throw UsageError("need 3 <= --from <= --to");
  const Dataset data = load_model_table_file(a.data, a.data_flags.table_schema());
  const auto dir = ensure_dir(a.out);
  std::ostringstream csv;
  csv << "max_nodes,mse,r_squared\n";
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t nodes = a.from; nodes <= a.to; ++nodes) {
    BoostConfig c = a.boost.config;
    c.max_nodes = nodes;
    const BoostedModel model = fit_ensemble(data, c);
    const auto [actual, predicted] = fitted_pairs(model, data);
    const FitReport r = fit_report(actual, predicted);
    csv << nodes << ',' << format_double(r.mse) << ',' << csv_opt(r.r_squared) << '\n';
    out << "max nodes " << nodes << ": MSE " << format_fixed(r.mse, 5) << ", R-sq "
        << fixed5(r.r_squared) << '\n';
    xs.push_back(static_cast<double>(nodes));
    ys.push_back(r.mse);
  }
  write_text(dir / "complexity.csv", csv.str());
  write_text(dir / "complexity.svg", svg::line_chart("Training MSE by tree size", "max nodes per tree",
                                                     "MSE", {{"mse", xs, ys, "#1f77b4", true}}));
  return 0;
}

// --- entry point ---------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boosted regression trees for annual food-inflation drivers", "brt"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Fit a model; write model, metrics, figures");
  c_train->add_option("data", train.data, "Model-table CSV")->required()->check(CLI::ExistingFile);
  c_train->add_option("--out", train.out, "Output directory")->capture_default_str();
  c_train->add_option("--roc-threshold", train.roc, "median, mean or value:<x>")->capture_default_str();
  add_boost_flags(*c_train, train.boost);
  add_data_flags(*c_train, train.data_flags);

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("evaluate", "Fit measures of a saved model on a table");
  c_eval->add_option("model", eval.model, "Model file")->required()->check(CLI::ExistingFile);
  c_eval->add_option("data", eval.data, "Model-table CSV")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--out", eval.out, "Directory for metrics.csv");
  c_eval->add_option("--roc-threshold", eval.roc, "median, mean or value:<x>")->capture_default_str();
  add_data_flags(*c_eval, eval.data_flags);

  ReportArgs report;
  auto* c_report = app.add_subcommand("report", "Relative influence and interaction tables");
  ReportArgs interact;
  auto* c_interact = app.add_subcommand("interact", "Interaction tables only");
  for (auto [cmd, args] : {std::pair{c_report, &report}, std::pair{c_interact, &interact}}) {
    cmd->add_option("model", args->model, "Model file")->required()->check(CLI::ExistingFile);
    cmd->add_option("data", args->data, "Model-table CSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", args->out, "Output directory")->capture_default_str();
    cmd->add_option("--top", args->top, "Keep the K strongest pairs (0 = all)");
    cmd->add_option("--interaction-denominator", args->denominator,
                    "Normalize by fitted (model) or observed (response) variation")
        ->check(CLI::IsMember({"model", "response"}))
        ->capture_default_str();
    add_data_flags(*cmd, args->data_flags);
  }

  PdpArgs pdp;
  auto* c_pdp = app.add_subcommand("pdp", "Partial dependence curves and surfaces");
  c_pdp->add_option("model", pdp.model, "Model file")->required()->check(CLI::ExistingFile);
  c_pdp->add_option("data", pdp.data, "Model-table CSV")->required()->check(CLI::ExistingFile);
  c_pdp->add_option("--out", pdp.out, "Output directory")->capture_default_str();
  auto* o_feature = c_pdp->add_option("--feature", pdp.feature, "Predictor to vary");
  c_pdp->add_option("--feature2", pdp.feature2, "Second predictor (surface)")->needs(o_feature);
  c_pdp->add_flag("--all", pdp.all, "One curve per predictor")->excludes(o_feature);
  c_pdp->add_option("--grid", pdp.grid, "observed or a point count")->capture_default_str();
  add_data_flags(*c_pdp, pdp.data_flags);

  BuildArgs build;
  auto* c_build = app.add_subcommand("build-data", "Assemble the model table from raw series");
  c_build->add_option("raw_dir", build.raw_dir, "Directory of raw series CSVs")
      ->required()
      ->check(CLI::ExistingDirectory);
  c_build->add_option("--out", build.out, "Output directory")->capture_default_str();
  c_build->add_option("--first-year", build.first_year)->capture_default_str();
  c_build->add_option("--last-year", build.last_year)->capture_default_str();
  c_build->add_option("--base-year", build.base_year)->capture_default_str();
  c_build->add_option("--msp-weights", build.msp_weights, "base or annual production shares")
      ->check(CLI::IsMember({"base", "annual"}))
      ->capture_default_str();
  c_build->add_option("--monsoon-lag", build.monsoon_lag, "Years of lag applied to MonsDev")
      ->capture_default_str();

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Training fit as a function of max nodes per tree");
  c_sweep->add_option("data", sweep.data, "Model-table CSV")->required()->check(CLI::ExistingFile);
  c_sweep->add_option("--out", sweep.out, "Output directory")->capture_default_str();
  c_sweep->add_option("--from", sweep.from, "Smallest max-nodes value")->capture_default_str();
  c_sweep->add_option("--to", sweep.to, "Largest max-nodes value")->capture_default_str();
  add_boost_flags(*c_sweep, sweep.boost);
  add_data_flags(*c_sweep, sweep.data_flags);

  std::uint64_t synth_seed = kStandinSeed;
  std::string synth_out = ".";
  auto* c_synth = app.add_subcommand("synth-data", "Write the synthetic stand-in model table");
  c_synth->add_option("--seed", synth_seed)->capture_default_str();
  c_synth->add_option("--out", synth_out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_train->parsed()) return run_train(train, out);
    if (c_eval->parsed()) return run_evaluate(eval, out, err);
    if (c_report->parsed()) return run_report(report, true, out, err);
    if (c_interact->parsed()) return run_report(interact, false, out, err);
    if (c_pdp->parsed()) return run_pdp(pdp, out, err);
    if (c_build->parsed()) return run_build_data(build, out);
    if (c_sweep->parsed()) return run_sweep(sweep, out);
    if (c_synth->parsed()) {
      std::ostringstream csv;
      write_model_table(make_standin_model_table(synth_seed), csv);
      const auto path = ensure_dir(synth_out) / "standin_model_table.csv";
      write_text(path, csv.str());
      out << "wrote " << path.string() << '\n';
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace brt::cli
