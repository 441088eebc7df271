#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "otpml/matrix.hpp"

namespace otpml {

/// One node of a fitted binary classification tree. Splits send rows with
/// `value <= threshold` to `left`.
struct TreeNode {
  std::int32_t feature = -1;  // -1 for leaves
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;

  std::size_t depth = 0;
  std::size_t samples = 0;
  std::array<std::size_t, 2> class_counts{};
  double gini = 0.0;
  int predicted_class = 0;
  double confidence = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

/// Nodes stored in pre-order; index 0 is the root.
struct Tree {
  std::vector<TreeNode> nodes;
  std::size_t n_features = 0;

  const TreeNode& root() const { return nodes.front(); }
  std::size_t depth() const;
  std::size_t leaf_count() const;
  bool operator==(const Tree&) const = default;
};

struct TreeConfig {
  std::optional<std::size_t> max_depth;  // >= 1 when set
  std::size_t min_samples_split = 2;
  std::uint64_t seed = 0;  // reserved; single trees are deterministic
};

struct ForestConfig {
  std::size_t n_estimators = 100;
  /// Features drawn per split; defaults to ceil(sqrt(p)).
  std::optional<std::size_t> max_features;
  bool bootstrap = true;
  std::optional<std::size_t> max_depth;
  std::size_t min_samples_split = 2;
  std::uint64_t seed = 0;
  /// Worker threads for training; 0 picks the hardware concurrency.
  std::size_t threads = 1;
};

struct Forest {
  std::vector<Tree> trees;
  bool operator==(const Forest&) const = default;
};

struct TreePrediction {
  int label;
  double confidence;
};

/// Greedy CART with Gini impurity. Candidate thresholds are midpoints between
/// consecutive distinct values; ties go to the lowest feature index, then the
/// lowest threshold. Errors: EmptyInput, LabelOutOfRange, ShapeMismatch.
Tree fit_tree(const FeatureView& x, std::span<const int> y, const TreeConfig& cfg = {});

TreePrediction predict_tree(const Tree& t, std::span<const double> row);
std::vector<int> predict_tree(const Tree& t, const FeatureView& x);

/// Impurity-decrease importance per feature, normalised to sum 1 (all zero
/// for a single-leaf tree).
std::vector<double> feature_importance(const Tree& t, std::size_t n_features);

/// One line per node, two-space indent per level:
///   [d<depth>] <name> <= <thr> | n=<samples> gini=<g> class=<c> conf=<conf>
/// Leaves print "leaf" in place of the condition.
std::string render_tree(const Tree& t, std::span<const std::string> names,
                        std::optional<std::size_t> max_render_depth = std::nullopt);

/// Bagged trees with per-split feature subsampling. Tree i draws from the
/// stream derive_seed(seed, i), so the result does not depend on `threads`.
Forest fit_forest(const FeatureView& x, std::span<const int> y, const ForestConfig& cfg = {});

/// Majority vote; ties go to 0. Throws EmptyInput for an empty forest.
int predict_forest(const Forest& f, std::span<const double> row);
std::vector<int> predict_forest(const Forest& f, const FeatureView& x);

std::string render_forest(const Forest& f, std::span<const std::string> names,
                          std::optional<std::size_t> max_render_depth = std::nullopt);

}  // namespace otpml
