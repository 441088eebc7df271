#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "otpml/config.hpp"
#include "otpml/dataset.hpp"
#include "otpml/eval.hpp"

namespace otpml {

struct ReportArtifact {
  std::string name;
  std::string content;
};

struct ReportBundle {
  std::vector<ReportArtifact> artifacts;

  /// nullptr when absent.
  const std::string* find(std::string_view name) const;
};

/// Called once per artifact, in production order, as soon as it is complete.
using ArtifactSink = std::function<void(const ReportArtifact&)>;

/// Rows of accuracy.txt, in order.
inline constexpr std::array<std::string_view, 9> kModelNames = {
    "decision_tree", "tree_depth4",  "random_forest",     "naive_bayes", "knn",
    "logistic",      "ols_classifier", "poisson_threshold", "ensemble"};

/// Reads + cleans the CSV, or runs the generator.
FeaturizedDataset load_input(const RunConfig& cfg);

/// Trains every model in kModelNames on split.train and predicts split.test.
/// Model errors carry the model name as context.
MultiRecipe model_suite(const RunConfig& cfg);

/// Produces the full report set. Each artifact goes to `sink` as soon as it
/// exists, so a failure part-way still leaves the earlier files behind.
ReportBundle run_pipeline(const RunConfig& cfg, const ArtifactSink& sink = {});

/// Writes one artifact under dir (created if needed). Throws Io.
void write_artifact(const std::filesystem::path& dir, const ReportArtifact& artifact);

}  // namespace otpml
