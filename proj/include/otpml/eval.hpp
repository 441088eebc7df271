#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "otpml/dataset.hpp"

namespace otpml {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
};

/// Fisher-Yates shuffle of 0..n-1 driven by mt19937_64(seed), then the first
/// round(test_fraction * n) positions (clamped to [1, n-1]) become the test
/// set. Errors: TooFewRows, InvalidFraction.
SplitIndices train_test_split(std::size_t n_rows, double test_fraction, std::uint64_t seed);

/// Seed of run `run` in a repeated evaluation.
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run);

/// Exact-match fraction. Errors: LengthMismatch, EmptyInput.
double accuracy(std::span<const int> predictions, std::span<const int> labels);

/// Thresholds both vectors at 95 and returns the exact-match fraction.
double threshold_regression_accuracy(std::span<const double> predicted_otp, std::span<const double> actual_otp);

/// Predicted labels for split.test, in order.
using Recipe = std::function<std::vector<int>(const FeaturizedDataset&, const SplitIndices&)>;

struct NamedPredictions {
  std::string name;
  std::vector<int> labels;
};

/// Several models trained on the same split (so fitted members can be shared).
using MultiRecipe = std::function<std::vector<NamedPredictions>(const FeaturizedDataset&, const SplitIndices&)>;

struct RepeatedAccuracy {
  std::string name;
  std::vector<double> per_run;
  double mean = 0.0;
};

/// Run i splits with run_seed(base_seed, i) and scores against bus_target.
RepeatedAccuracy repeated_mean_accuracy(const Recipe& recipe, const FeaturizedDataset& d, std::size_t n_runs,
                                        std::uint64_t base_seed, double test_fraction = 0.2);

std::vector<RepeatedAccuracy> repeated_mean_accuracies(const MultiRecipe& recipe, const FeaturizedDataset& d,
                                                       std::size_t n_runs, std::uint64_t base_seed,
                                                       double test_fraction = 0.2);

/// bus_target labels for the given rows.
std::vector<int> labels_for(const FeaturizedDataset& d, std::span<const std::size_t> rows);

}  // namespace otpml
