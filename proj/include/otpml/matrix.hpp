#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace otpml {

/// Read-only column-major view over feature columns owned elsewhere.
class FeatureView {
 public:
  FeatureView() = default;
  /// All columns must have `rows` entries (ShapeMismatch otherwise).
  FeatureView(std::vector<std::span<const double>> columns, std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }

  double operator()(std::size_t row, std::size_t col) const { return columns_[col][row]; }
  std::span<const double> column(std::size_t col) const { return columns_[col]; }

  void copy_row(std::size_t row, std::span<double> out) const;
  std::vector<double> row(std::size_t row) const;

 private:
  std::vector<std::span<const double>> columns_;
  std::size_t rows_ = 0;
};

/// Owning column-major matrix.
class ColumnMatrix {
 public:
  ColumnMatrix() = default;
  ColumnMatrix(std::size_t rows, std::size_t cols);

  /// Builds from row-major nested vectors; rows must share a width.
  static ColumnMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }

  double& operator()(std::size_t row, std::size_t col) { return columns_[col][row]; }
  double operator()(std::size_t row, std::size_t col) const { return columns_[col][row]; }

  std::span<double> column(std::size_t col) { return columns_[col]; }
  std::span<const double> column(std::size_t col) const { return columns_[col]; }

  FeatureView view() const;

 private:
  std::vector<std::vector<double>> columns_;
  std::size_t rows_ = 0;
};

/// Copies the selected rows (in the given order) into a new matrix.
ColumnMatrix gather_rows(const FeatureView& x, std::span<const std::size_t> rows);

/// Copies the selected entries of `values` in the given order.
template <typename T>
std::vector<T> gather(std::span<const T> values, std::span<const std::size_t> rows) {
  std::vector<T> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(values[r]);
  return out;
}

}  // namespace otpml
