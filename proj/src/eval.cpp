#include "otpml/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "otpml/error.hpp"
#include "otpml/rng.hpp"

namespace otpml {

SplitIndices train_test_split(std::size_t n_rows, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidFraction, fmt::format("test_fraction {} outside (0, 1)", test_fraction));
  }
  if (n_rows < 2) throw Error(ErrorKind::TooFewRows, "a split needs at least two rows");
  std::vector<std::size_t> perm(n_rows);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n_rows - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i + 1));
    std::swap(perm[i], perm[j]);
  }
  const auto n_test = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n_rows))), 1, n_rows - 1);
  SplitIndices s;
  s.seed = seed;
  s.test_fraction = test_fraction;
  s.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
  s.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
  return s;
}

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run) { return derive_seed(base_seed, run); }

double accuracy(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw Error(ErrorKind::LengthMismatch, fmt::format("{} predictions for {} labels", predictions.size(), labels.size()));
  }
  if (labels.empty()) throw Error(ErrorKind::EmptyInput, "accuracy of nothing");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += predictions[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double threshold_regression_accuracy(std::span<const double> predicted_otp, std::span<const double> actual_otp) {
  if (predicted_otp.size() != actual_otp.size()) {
    throw Error(ErrorKind::LengthMismatch,
                fmt::format("{} predictions for {} values", predicted_otp.size(), actual_otp.size()));
  }
  if (actual_otp.empty()) throw Error(ErrorKind::EmptyInput, "accuracy of nothing");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < actual_otp.size(); ++i) {
    hits += on_time_label(predicted_otp[i]) == on_time_label(actual_otp[i]);
  }
  return static_cast<double>(hits) / static_cast<double>(actual_otp.size());
}

std::vector<int> labels_for(const FeaturizedDataset& d, std::span<const std::size_t> rows) {
  const auto target = d.table().column(columns::bus_target);
  std::vector<int> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(static_cast<int>(target[r]));
  return out;
}

RepeatedAccuracy repeated_mean_accuracy(const Recipe& recipe, const FeaturizedDataset& d, std::size_t n_runs,
                                        std::uint64_t base_seed, double test_fraction) {
  auto multi = [&recipe](const FeaturizedDataset& data, const SplitIndices& split) {
    return std::vector<NamedPredictions>{{"model", recipe(data, split)}};
  };
  return repeated_mean_accuracies(multi, d, n_runs, base_seed, test_fraction).front();
}

std::vector<RepeatedAccuracy> repeated_mean_accuracies(const MultiRecipe& recipe, const FeaturizedDataset& d,
                                                       std::size_t n_runs, std::uint64_t base_seed,
                                                       double test_fraction) {
  if (n_runs < 1) throw Error(ErrorKind::InvalidConfig, "n_runs must be >= 1");
  std::vector<RepeatedAccuracy> out;
  for (std::size_t run = 0; run < n_runs; ++run) {
    const SplitIndices split = train_test_split(d.n_rows(), test_fraction, run_seed(base_seed, run));
    const std::vector<int> truth = labels_for(d, split.test);
    const auto predictions = recipe(d, split);
    if (run == 0) {
      for (const auto& p : predictions) out.push_back({p.name, {}, 0.0});
    } else if (predictions.size() != out.size()) {
      throw Error(ErrorKind::ShapeMismatch, "recipe returned a different model set");
    }
    for (std::size_t m = 0; m < predictions.size(); ++m) {
      out[m].per_run.push_back(accuracy(predictions[m].labels, truth));
    }
  }
  for (auto& r : out) r.mean = std::accumulate(r.per_run.begin(), r.per_run.end(), 0.0) / static_cast<double>(n_runs);
  return out;
}

}  // namespace otpml
