#pragma once

#include <span>
#include <string>
#include <vector>

#include "otpml/dataset.hpp"
#include "otpml/matrix.hpp"

namespace otpml {

/// Symmetric matrix of Pearson coefficients with unit diagonal.
struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;

  double at(std::size_t i, std::size_t j) const { return values[i][j]; }
};

/// Two-pass sample mean.
double mean(std::span<const double> x);

/// Two-pass sample variance (divisor n-1). Requires n >= 2.
double sample_variance(std::span<const double> x);

/// Pearson r using two-pass centred sums. Throws TooFewRows (n < 2),
/// LengthMismatch, ConstantColumn.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pairwise Pearson correlation over the named columns.
CorrelationMatrix corr_matrix(const Dataset& d, std::span<const std::string> names);

/// Aligned text table, two decimals, one row per variable.
std::string render_correlation(const CorrelationMatrix& m);

/// Per-column mean and sample standard deviation learned from training data.
struct Standardizer {
  std::vector<double> means;
  std::vector<double> sds;

  std::size_t n_columns() const noexcept { return means.size(); }

  /// (x - mean) / sd, or 0 when sd == 0.
  double apply(std::size_t column, double value) const {
    return sds[column] > 0.0 ? (value - means[column]) / sds[column] : 0.0;
  }

  /// Standardizes one row into `out`. Throws ColumnCountMismatch.
  void apply_row(std::span<const double> row, std::span<double> out) const;
};

/// Throws TooFewRows when fewer than two rows.
Standardizer zscore_fit(const FeatureView& x);

/// Throws ColumnCountMismatch when widths differ.
ColumnMatrix zscore_apply(const Standardizer& s, const FeatureView& x);

}  // namespace otpml
