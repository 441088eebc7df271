#include "otpml/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <numeric>

#include <fmt/format.h>

#include "otpml/classifier.hpp"
#include "otpml/ensemble.hpp"
#include "otpml/error.hpp"
#include "otpml/rng.hpp"
#include "otpml/stats.hpp"
#include "otpml/synth.hpp"

namespace otpml {

namespace {

template <class F>
auto as_model(std::string_view name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw e.with_context(std::string(name));
  }
}

struct TrainingData {
  std::vector<std::string> names;
  ColumnMatrix x;
  std::vector<int> y;
  std::vector<double> otp;
};

TrainingData training_data(const FeaturizedDataset& d, std::span<const std::size_t> rows,
                           std::span<const std::string_view> exclude = {}) {
  TrainingData t;
  t.names = feature_names(exclude);
  const Selection sel = select_columns(d.table(), t.names, columns::bus_target);
  t.x = gather_rows(sel.x, rows);
  t.y = to_labels(gather(sel.y, rows));
  t.otp = gather(d.table().column(columns::otp), rows);
  return t;
}

ColumnMatrix test_matrix(const FeaturizedDataset& d, std::span<const std::size_t> rows,
                         std::span<const std::string> names) {
  return gather_rows(select_columns(d.table(), names, columns::bus_target).x, rows);
}

std::vector<double> as_double(std::span<const int> y) { return {y.begin(), y.end()}; }

std::uint64_t forest_seed(std::uint64_t split_seed) { return derive_seed(split_seed, 1); }

}  // namespace

const std::string* ReportBundle::find(std::string_view name) const {
  for (const auto& a : artifacts) {
    if (a.name == name) return &a.content;
  }
  return nullptr;
}

FeaturizedDataset load_input(const RunConfig& cfg) {
  if (cfg.csv_path) {
    const auto records = load_csv(*cfg.csv_path);
    return featurize(clean(records));
  }
  return generate(cfg.generator);
}

MultiRecipe model_suite(const RunConfig& cfg) {
  return [cfg](const FeaturizedDataset& d, const SplitIndices& split) {
    const TrainingData t = training_data(d, split.train);
    const ColumnMatrix x_test = test_matrix(d, split.test, t.names);
    const FeatureView xv = t.x.view();
    const FeatureView tv = x_test.view();
    const std::size_t p = t.names.size();

    auto tree = as_model("decision_tree", [&] {
      TreeConfig tc;
      tc.min_samples_split = cfg.tree_min_samples_split;
      return std::make_shared<TreeClassifier>(fit_tree(xv, t.y, tc));
    });
    auto shallow = as_model("tree_depth4", [&] {
      TreeConfig tc;
      tc.max_depth = cfg.tree_max_depth;
      tc.min_samples_split = cfg.tree_min_samples_split;
      return std::make_shared<TreeClassifier>(fit_tree(xv, t.y, tc));
    });
    auto forest = as_model("random_forest", [&] {
      ForestConfig fc;
      fc.n_estimators = cfg.forest_n_estimators;
      fc.min_samples_split = cfg.tree_min_samples_split;
      fc.seed = forest_seed(split.seed);
      fc.threads = cfg.forest_threads;
      return std::make_shared<ForestClassifier>(fit_forest(xv, t.y, fc), p);
    });
    auto gnb = as_model("naive_bayes", [&] { return std::make_shared<GnbClassifier>(fit_gnb(xv, t.y)); });
    auto knn = as_model("knn", [&] { return std::make_shared<KnnClassifier>(fit_knn(xv, t.y, cfg.knn_k)); });
    auto logit = as_model("logistic", [&] {
      return std::make_shared<GlmClassifier>(fit_logistic(xv, as_double(t.y)), 0.5);
    });
    auto ols = as_model("ols_classifier", [&] {
      return std::make_shared<GlmClassifier>(fit_ols(xv, as_double(t.y)), 0.5);
    });
    auto poisson = as_model("poisson_threshold", [&] {
      return std::make_shared<GlmClassifier>(fit_poisson(xv, t.otp), static_cast<double>(kOnTimeThreshold));
    });

    std::vector<NamedPredictions> out;
    out.push_back({"decision_tree", tree->predict_all(tv)});
    out.push_back({"tree_depth4", shallow->predict_all(tv)});
    out.push_back({"random_forest", forest->predict_all(tv)});
    out.push_back({"naive_bayes", gnb->predict_all(tv)});
    out.push_back({"knn", knn->predict_all(tv)});
    out.push_back({"logistic", logit->predict_all(tv)});
    out.push_back({"ols_classifier", ols->predict_all(tv)});
    out.push_back({"poisson_threshold", poisson->predict_all(tv)});

    // The members' test labels are already known; tallying them is the same
    // as predict_vote on each row.
    const std::vector<std::vector<int>> votes = {out[0].labels, out[4].labels, out[2].labels, out[3].labels,
                                                 out[5].labels};
    const std::vector<double> weights = {cfg.weights.decision_tree, cfg.weights.knn, cfg.weights.random_forest,
                                         cfg.weights.naive_bayes, cfg.weights.logistic};
    out.push_back({"ensemble", as_model("ensemble", [&] { return tally_votes(votes, weights); })});
    return out;
  };
}

namespace {

std::string render_importance(const Tree& tree, std::span<const std::string> names, const GlmFit& logit) {
  const auto imp = feature_importance(tree, names.size());
  std::vector<std::size_t> order(names.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return imp[a] > imp[b]; });
  std::string out = "gini importance (unrestricted tree, run 0 training split)\n";
  out += fmt::format("{:>4}  {:<16} {:>8}\n", "rank", "feature", "share");
  for (std::size_t r = 0; r < order.size(); ++r) {
    out += fmt::format("{:>4}  {:<16} {:>8.4f}\n", r + 1, names[order[r]], imp[order[r]]);
  }

  std::vector<std::size_t> by_slope(names.size());
  std::iota(by_slope.begin(), by_slope.end(), std::size_t{0});
  std::stable_sort(by_slope.begin(), by_slope.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(logit.standardized_slopes[a]) > std::abs(logit.standardized_slopes[b]);
  });
  out += "\nlogistic standardized slopes (coef * sd), by magnitude\n";
  out += fmt::format("{:>4}  {:<16} {:>10}\n", "rank", "feature", "slope");
  for (std::size_t r = 0; r < by_slope.size(); ++r) {
    out += fmt::format("{:>4}  {:<16} {:>+10.4f}\n", r + 1, names[by_slope[r]],
                       logit.standardized_slopes[by_slope[r]]);
  }
  return out;
}

std::string render_accuracy(const RunConfig& cfg, std::span<const RepeatedAccuracy> results) {
  std::string out = fmt::format("mean test accuracy over {} runs (test_fraction={}, base_seed={})\n", cfg.n_runs,
                                cfg.test_fraction, cfg.base_seed);
  out += fmt::format("{:<18} {:>7} ", "model", "mean");
  for (std::size_t i = 0; i < cfg.n_runs; ++i) out += fmt::format(" {:>6}", fmt::format("run{}", i));
  out += '\n';
  for (const auto& r : results) {
    out += fmt::format("{:<18} {:>7.4f} ", r.name, r.mean);
    for (double a : r.per_run) out += fmt::format(" {:>6.4f}", a);
    out += '\n';
  }
  return out;
}

}  // namespace

ReportBundle run_pipeline(const RunConfig& cfg, const ArtifactSink& sink) {
  cfg.validate();
  ReportBundle bundle;
  auto emit = [&](std::string name, std::string content) {
    bundle.artifacts.push_back({std::move(name), std::move(content)});
    if (sink) sink(bundle.artifacts.back());
  };

  const FeaturizedDataset d = load_input(cfg);
  if (!cfg.csv_path) emit("calibration.txt", calibration_report(d, cfg.generator));

  const std::vector<std::string> telemetry(kTelemetryColumns.begin(), kTelemetryColumns.end());
  emit("correlation.txt", render_correlation(corr_matrix(d.table(), telemetry)));

  const SplitIndices split0 = train_test_split(d.n_rows(), cfg.test_fraction, run_seed(cfg.base_seed, 0));
  const TrainingData t = training_data(d, split0.train);
  const FeatureView xv = t.x.view();

  TreeConfig full_cfg;
  full_cfg.min_samples_split = cfg.tree_min_samples_split;
  const Tree full = as_model("decision_tree", [&] { return fit_tree(xv, t.y, full_cfg); });
  emit("tree_full.txt", render_tree(full, t.names));

  TreeConfig shallow_cfg = full_cfg;
  shallow_cfg.max_depth = cfg.tree_max_depth;
  const Tree shallow = as_model("tree_depth4", [&] { return fit_tree(xv, t.y, shallow_cfg); });
  emit("tree_depth4.txt", render_tree(shallow, t.names));

  const std::array<std::string_view, 1> no_late = {columns::late_arrival};
  const TrainingData t_nl = training_data(d, split0.train, no_late);
  const Tree without = as_model("tree_no_late_arrival", [&] { return fit_tree(t_nl.x.view(), t_nl.y, full_cfg); });
  emit("tree_no_late_arrival.txt", render_tree(without, t_nl.names, cfg.tree_max_depth));

  const GlmFit logit = as_model("logistic", [&] { return fit_logistic(xv, as_double(t.y)); });
  emit("importance.txt", render_importance(full, t.names, logit));
  emit("logit_summary.txt", summary_table(logit, t.names, columns::bus_target));

  const GlmFit poisson = as_model("poisson_threshold", [&] { return fit_poisson(xv, t.otp); });
  emit("poisson_summary.txt", summary_table(poisson, t.names, columns::otp));

  const auto results = repeated_mean_accuracies(model_suite(cfg), d, cfg.n_runs, cfg.base_seed, cfg.test_fraction);
  emit("accuracy.txt", render_accuracy(cfg, results));
  return bundle;
}

void write_artifact(const std::filesystem::path& dir, const ReportArtifact& artifact) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  const auto path = dir / artifact.name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string());
  out << artifact.content;
  out.close();
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

}  // namespace otpml
