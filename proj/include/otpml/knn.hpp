#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "otpml/matrix.hpp"
#include "otpml/stats.hpp"

namespace otpml {

/// Brute-force k-nearest-neighbour classifier over z-scored features.
struct KnnModel {
  Standardizer standardizer;
  std::vector<double> train;  // row-major, standardized
  std::vector<int> labels;
  std::size_t k = 5;

  std::size_t n_features() const noexcept { return standardizer.n_columns(); }
  std::size_t n_train() const noexcept { return labels.size(); }
  std::span<const double> train_row(std::size_t i) const {
    return std::span<const double>(train).subspan(i * n_features(), n_features());
  }
};

/// Errors: EmptyInput, ShapeMismatch, LabelOutOfRange, InvalidK, TooFewRows.
KnnModel fit_knn(const FeatureView& x, std::span<const int> y, std::size_t k = 5);

/// Squared Euclidean distance.
double squared_distance(std::span<const double> a, std::span<const double> b);

/// The k nearest training rows (distance ties go to the lower row index)
/// vote; a vote tie goes to the class with the smaller summed distance,
/// then to 0. Throws ShapeMismatch.
int predict_knn(const KnnModel& m, std::span<const double> row);
std::vector<int> predict_knn(const KnnModel& m, const FeatureView& x);

}  // namespace otpml
