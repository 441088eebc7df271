#include "otpml/stats.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "otpml/error.hpp"

namespace otpml {

double mean(std::span<const double> x) {
  if (x.empty()) throw Error(ErrorKind::TooFewRows, "mean of empty column");
  double sum = 0.0;
  for (double v : x) sum += v;
  const double m = sum / static_cast<double>(x.size());
  // second pass corrects the rounding error of the first
  double correction = 0.0;
  for (double v : x) correction += v - m;
  return m + correction / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw Error(ErrorKind::TooFewRows, "variance needs at least two rows");
  const double m = mean(x);
  double ss = 0.0;
  double comp = 0.0;
  for (double v : x) {
    ss += (v - m) * (v - m);
    comp += v - m;
  }
  const double n = static_cast<double>(x.size());
  return std::max(0.0, (ss - comp * comp / n) / (n - 1.0));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::LengthMismatch, "pearson inputs differ in length");
  if (x.size() < 2) throw Error(ErrorKind::TooFewRows, "pearson needs at least two rows");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::ConstantColumn, "zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix corr_matrix(const Dataset& d, std::span<const std::string> names) {
  if (d.n_rows() < 2) throw Error(ErrorKind::TooFewRows, "correlation needs at least two rows");
  std::vector<std::span<const double>> cols;
  for (const auto& name : names) {
    cols.push_back(d.column(name));
    if (sample_variance(cols.back()) == 0.0) throw Error(ErrorKind::ConstantColumn, name);
  }
  const std::size_t k = names.size();
  CorrelationMatrix m{std::vector<std::string>(names.begin(), names.end()),
                      std::vector<std::vector<double>>(k, std::vector<double>(k, 1.0))};
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      m.values[i][j] = m.values[j][i] = pearson(cols[i], cols[j]);
    }
  }
  return m;
}

std::string render_correlation(const CorrelationMatrix& m) {
  std::size_t width = 6;
  for (const auto& n : m.names) width = std::max(width, n.size());
  std::string out = fmt::format("{:<{}}", "", width);
  for (const auto& n : m.names) out += fmt::format("  {:>{}}", n, width);
  out += '\n';
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    out += fmt::format("{:<{}}", m.names[i], width);
    for (std::size_t j = 0; j < m.names.size(); ++j) out += fmt::format("  {:>{}.2f}", m.values[i][j], width);
    out += '\n';
  }
  return out;
}

void Standardizer::apply_row(std::span<const double> row, std::span<double> out) const {
  if (row.size() != means.size() || out.size() != means.size()) {
    throw Error(ErrorKind::ColumnCountMismatch, "row width " + std::to_string(row.size()) + ", standardizer has " +
                                                    std::to_string(means.size()) + " columns");
  }
  for (std::size_t c = 0; c < row.size(); ++c) out[c] = apply(c, row[c]);
}

Standardizer zscore_fit(const FeatureView& x) {
  if (x.rows() < 2) throw Error(ErrorKind::TooFewRows, "standardizer needs at least two rows");
  Standardizer s;
  s.means.reserve(x.cols());
  s.sds.reserve(x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    s.means.push_back(mean(x.column(c)));
    s.sds.push_back(std::sqrt(sample_variance(x.column(c))));
  }
  return s;
}

ColumnMatrix zscore_apply(const Standardizer& s, const FeatureView& x) {
  if (x.cols() != s.n_columns()) {
    throw Error(ErrorKind::ColumnCountMismatch, "matrix has " + std::to_string(x.cols()) +
                                                    " columns, standardizer has " + std::to_string(s.n_columns()));
  }
  ColumnMatrix out(x.rows(), x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    auto src = x.column(c);
    auto dst = out.column(c);
    for (std::size_t r = 0; r < x.rows(); ++r) dst[r] = s.apply(c, src[r]);
  }
  return out;
}

}  // namespace otpml
