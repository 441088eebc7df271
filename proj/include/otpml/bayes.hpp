#pragma once

#include <array>
#include <span>
#include <vector>

#include "otpml/matrix.hpp"

namespace otpml {

/// Gaussian naive Bayes over two classes. Each feature is modelled as an
/// independent normal within a class.
struct GnbModel {
  std::array<double, 2> priors{};
  std::array<std::vector<double>, 2> means;
  std::array<std::vector<double>, 2> variances;  // floored, always > 0
  double epsilon = 0.0;

  std::size_t n_features() const noexcept { return means[0].size(); }
};

struct GnbPrediction {
  int label;
  /// Unnormalised log posteriors: log prior + sum of log densities.
  std::array<double, 2> log_posterior;
};

/// Class variances are maximum-likelihood (divisor n_c); every variance gets
/// epsilon = 1e-9 * max total feature variance added.
/// Errors: EmptyInput, ShapeMismatch, LabelOutOfRange, SingleClassInput.
GnbModel fit_gnb(const FeatureView& x, std::span<const int> y);

/// Ties go to label 0. Throws ShapeMismatch.
GnbPrediction predict_gnb(const GnbModel& m, std::span<const double> row);
std::vector<int> predict_gnb(const GnbModel& m, const FeatureView& x);

/// exp-normalised posteriors computed in log space.
std::array<double, 2> normalized_posterior(const std::array<double, 2>& log_posterior);

}  // namespace otpml
