#include "otpml/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "otpml/error.hpp"

namespace otpml {

GnbModel fit_gnb(const FeatureView& x, std::span<const int> y) {
  if (x.rows() == 0 || x.cols() == 0) throw Error(ErrorKind::EmptyInput, "naive Bayes needs data");
  if (y.size() != x.rows()) throw Error(ErrorKind::ShapeMismatch, fmt::format("{} labels for {} rows", y.size(), x.rows()));
  std::array<std::size_t, 2> n{};
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw Error(ErrorKind::LabelOutOfRange, fmt::format("label {} at row {}", y[i], i));
    ++n[static_cast<std::size_t>(y[i])];
  }
  if (n[0] == 0 || n[1] == 0) throw Error(ErrorKind::SingleClassInput, "naive Bayes needs both classes");

  const std::size_t p = x.cols();
  const double n_total = static_cast<double>(x.rows());
  GnbModel m;
  double max_var = 0.0;
  for (int c = 0; c < 2; ++c) {
    m.priors[c] = static_cast<double>(n[c]) / n_total;
    m.means[c].assign(p, 0.0);
    m.variances[c].assign(p, 0.0);
  }
  for (std::size_t f = 0; f < p; ++f) {
    auto col = x.column(f);
    std::array<double, 2> sum{};
    double total = 0.0;
    for (std::size_t i = 0; i < col.size(); ++i) {
      sum[static_cast<std::size_t>(y[i])] += col[i];
      total += col[i];
    }
    const double grand_mean = total / n_total;
    std::array<double, 2> ss{};
    double total_ss = 0.0;
    for (int c = 0; c < 2; ++c) m.means[c][f] = sum[c] / static_cast<double>(n[c]);
    for (std::size_t i = 0; i < col.size(); ++i) {
      const auto c = static_cast<std::size_t>(y[i]);
      const double d = col[i] - m.means[c][f];
      ss[c] += d * d;
      total_ss += (col[i] - grand_mean) * (col[i] - grand_mean);
    }
    for (int c = 0; c < 2; ++c) m.variances[c][f] = ss[c] / static_cast<double>(n[c]);
    max_var = std::max(max_var, total_ss / n_total);
  }
  m.epsilon = 1e-9 * max_var;
  if (!(m.epsilon > 0.0)) m.epsilon = 1e-9;  // every feature constant
  for (int c = 0; c < 2; ++c) {
    for (double& v : m.variances[c]) v += m.epsilon;
  }
  return m;
}

GnbPrediction predict_gnb(const GnbModel& m, std::span<const double> row) {
  if (row.size() != m.n_features()) {
    throw Error(ErrorKind::ShapeMismatch, fmt::format("row has {} values, model expects {}", row.size(), m.n_features()));
  }
  GnbPrediction out{0, {}};
  for (int c = 0; c < 2; ++c) {
    double lp = std::log(m.priors[c]);
    for (std::size_t f = 0; f < row.size(); ++f) {
      const double var = m.variances[c][f];
      const double d = row[f] - m.means[c][f];
      lp -= 0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
    }
    out.log_posterior[c] = lp;
  }
  out.label = out.log_posterior[1] > out.log_posterior[0] ? 1 : 0;
  return out;
}

std::vector<int> predict_gnb(const GnbModel& m, const FeatureView& x) {
  std::vector<int> out(x.rows());
  std::vector<double> row(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    x.copy_row(r, row);
    out[r] = predict_gnb(m, row).label;
  }
  return out;
}

std::array<double, 2> normalized_posterior(const std::array<double, 2>& lp) {
  const double top = std::max(lp[0], lp[1]);
  const double a = std::exp(lp[0] - top);
  const double b = std::exp(lp[1] - top);
  return {a / (a + b), b / (a + b)};
}

}  // namespace otpml
