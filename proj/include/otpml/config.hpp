#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "otpml/synth.hpp"

namespace otpml {

struct EnsembleWeights {
  double decision_tree = 30.0;
  double knn = 25.0;
  double random_forest = 10.0;
  double naive_bayes = 1.0;
  double logistic = 10.0;

  bool operator==(const EnsembleWeights&) const = default;
};

/// Everything one pipeline run needs. Input is either a CSV file or the
/// synthetic generator.
struct RunConfig {
  std::optional<std::filesystem::path> csv_path;
  GeneratorConfig generator;

  double test_fraction = 0.2;
  std::size_t n_runs = 10;
  std::uint64_t base_seed = 42;

  std::size_t tree_max_depth = 4;  // the readable, depth-capped tree
  std::size_t tree_min_samples_split = 2;
  std::size_t forest_n_estimators = 100;
  std::size_t forest_threads = 1;  // 0 = hardware concurrency
  std::size_t knn_k = 5;
  EnsembleWeights weights;

  std::filesystem::path output_dir = "reports";

  /// Throws InvalidConfig / BadValue / NotPositiveDefinite.
  void validate() const;
};

/// Parses `key = value` lines ('#' starts a comment), then applies each
/// "key=value" override in order. Unknown keys are rejected; omitted keys
/// keep their defaults. Errors: UnknownKey, BadValue, ConflictingSources.
RunConfig parse_config(std::string_view text, std::span<const std::string> overrides = {});

RunConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides = {});

/// Every key with its current value, in the same format parse_config reads.
std::string to_config_text(const RunConfig& cfg);

}  // namespace otpml
