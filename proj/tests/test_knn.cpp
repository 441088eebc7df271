#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "otpml/dataset.hpp"
#include "otpml/knn.hpp"
#include "otpml/synth.hpp"

using namespace otpml;
using testing::throws;

TEST_CASE("k bounds") {
  const auto x = testing::rows({{0}, {1}, {2}});
  const std::vector<int> y = {0, 1, 1};
  CHECK(throws([&] { fit_knn(x.view(), y, 0); }, ErrorKind::InvalidK));
  CHECK(throws([&] { fit_knn(x.view(), y, 4); }, ErrorKind::InvalidK));
  CHECK(throws([] { fit_knn(ColumnMatrix(0, 1).view(), std::vector<int>{}, 1); }, ErrorKind::EmptyInput));
  const KnnModel all = fit_knn(x.view(), y, 3);
  for (double q : {-10.0, 0.0, 1.5, 50.0}) CHECK(predict_knn(all, std::vector<double>{q}) == 1);
  CHECK(throws([&] { predict_knn(all, std::vector<double>{1, 2}); }, ErrorKind::ShapeMismatch));
}

TEST_CASE("k = 1 returns the matching training label") {
  const auto x = testing::rows({{0, 0}, {5, 1}, {9, 3}});
  const KnnModel m = fit_knn(x.view(), std::vector<int>{1, 0, 1}, 1);
  CHECK(predict_knn(m, std::vector<double>{5, 1}) == 0);
  CHECK(predict_knn(m, std::vector<double>{9, 3}) == 1);
}

TEST_CASE("majority of three") {
  const auto x = testing::rows({{0}, {1}, {2}, {100}});
  const KnnModel m = fit_knn(x.view(), std::vector<int>{1, 1, 0, 0}, 3);
  CHECK(predict_knn(m, std::vector<double>{1}) == 1);
}

TEST_CASE("vote tie goes to the closer class, then to 0") {
  const auto x = testing::rows({{0}, {3}, {10}});
  // k=2 from query 1: neighbours 0 (label 1, d=1) and 3 (label 0, d=2)
  const KnnModel closer = fit_knn(x.view(), std::vector<int>{1, 0, 0}, 2);
  CHECK(predict_knn(closer, std::vector<double>{1}) == 1);
  const auto sym = testing::rows({{0}, {2}});
  const KnnModel even = fit_knn(sym.view(), std::vector<int>{1, 0}, 2);
  CHECK(predict_knn(even, std::vector<double>{1}) == 0);
}

TEST_CASE("stored rows and squared distance") {
  const auto d = generate(GeneratorConfig{.n_rows = 800});
  const auto names = feature_names();
  const auto x = select_columns(d.table(), names, columns::bus_target).x;
  const KnnModel m = fit_knn(x, to_labels(d.table().column(columns::bus_target)), 5);
  CHECK(m.n_train() == 800);
  for (std::size_t i = 0; i + 1 < 50; ++i) {
    const auto a = m.train_row(i);
    const auto b = m.train_row(i + 1);
    double naive = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) naive += (a[c] - b[c]) * (a[c] - b[c]);
    CHECK(std::abs(squared_distance(a, b) - naive) <= 1e-10);
  }
}

TEST_CASE("matches the full-sort oracle, ties included") {
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<std::size_t> n_d(2, 20), p_d(1, 3);
  std::uniform_int_distribution<int> lv_d(2, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = n_d(gen), p = p_d(gen);
    const int levels = lv_d(gen);
    const auto rows = oracle::grid_rows(gen, n, p, levels);
    const auto y = oracle::random_labels(gen, n);
    std::uniform_int_distribution<std::size_t> k_d(1, n);
    const KnnModel m = fit_knn(ColumnMatrix::from_rows(rows).view(), y, k_d(gen));
    for (const auto& q : oracle::grid_rows(gen, 5, p, levels + 1)) {
      CHECK(predict_knn(m, q) == oracle::knn_predict(m, q));
    }
  }
}

TEST_CASE("k = 1 self prediction reproduces distinct training labels") {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> z;
  std::vector<std::vector<double>> rows(60, std::vector<double>(3));
  for (auto& r : rows) for (auto& v : r) v = z(gen);
  const auto y = oracle::random_labels(gen, rows.size());
  const auto x = ColumnMatrix::from_rows(rows);
  const KnnModel m = fit_knn(x.view(), y, 1);
  CHECK(predict_knn(m, x.view()) == y);
}

TEST_CASE("positive rescaling of a raw column changes nothing") {
  const auto d = generate(GeneratorConfig{.n_rows = 600});
  const auto names = feature_names();
  const auto x = select_columns(d.table(), names, columns::bus_target).x;
  const auto y = to_labels(d.table().column(columns::bus_target));
  std::vector<std::vector<double>> raw, scaled;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto row = x.row(r);
    raw.push_back(row);
    row[4] *= 8.0;  // a power of two keeps the standardized values bit-identical
    scaled.push_back(row);
  }
  const auto a = ColumnMatrix::from_rows(raw);
  const auto b = ColumnMatrix::from_rows(scaled);
  const auto pa = predict_knn(fit_knn(a.view(), y, 5), a.view());
  const auto pb = predict_knn(fit_knn(b.view(), y, 5), b.view());
  CHECK(pa == pb);
}
