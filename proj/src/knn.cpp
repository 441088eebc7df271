#include "otpml/knn.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "otpml/error.hpp"

namespace otpml {

KnnModel fit_knn(const FeatureView& x, std::span<const int> y, std::size_t k) {
  if (x.rows() == 0 || x.cols() == 0) throw Error(ErrorKind::EmptyInput, "knn needs data");
  if (y.size() != x.rows()) throw Error(ErrorKind::ShapeMismatch, fmt::format("{} labels for {} rows", y.size(), x.rows()));
  if (k < 1 || k > x.rows()) throw Error(ErrorKind::InvalidK, fmt::format("k={} with {} training rows", k, x.rows()));
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw Error(ErrorKind::LabelOutOfRange, fmt::format("label {} at row {}", y[i], i));
  }
  KnnModel m;
  m.k = k;
  m.standardizer = zscore_fit(x);
  m.labels.assign(y.begin(), y.end());
  const std::size_t p = x.cols();
  m.train.resize(x.rows() * p);
  for (std::size_t c = 0; c < p; ++c) {
    auto col = x.column(c);
    for (std::size_t r = 0; r < x.rows(); ++r) m.train[r * p + c] = m.standardizer.apply(c, col[r]);
  }
  return m;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

int predict_knn(const KnnModel& m, std::span<const double> row) {
  if (row.size() != m.n_features()) {
    throw Error(ErrorKind::ShapeMismatch, fmt::format("row has {} values, model expects {}", row.size(), m.n_features()));
  }
  std::vector<double> query(row.size());
  m.standardizer.apply_row(row, query);

  std::vector<std::pair<double, std::size_t>> dist(m.n_train());
  for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = {squared_distance(query, m.train_row(i)), i};
  const auto kth = dist.begin() + static_cast<std::ptrdiff_t>(m.k);
  std::partial_sort(dist.begin(), kth, dist.end());

  std::array<std::size_t, 2> votes{};
  std::array<double, 2> summed{};
  for (auto it = dist.begin(); it != kth; ++it) {
    const auto label = static_cast<std::size_t>(m.labels[it->second]);
    ++votes[label];
    summed[label] += std::sqrt(it->first);
  }
  if (votes[0] != votes[1]) return votes[1] > votes[0] ? 1 : 0;
  return summed[1] < summed[0] ? 1 : 0;
}

std::vector<int> predict_knn(const KnnModel& m, const FeatureView& x) {
  std::vector<int> out(x.rows());
  std::vector<double> row(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    x.copy_row(r, row);
    out[r] = predict_knn(m, row);
  }
  return out;
}

}  // namespace otpml
