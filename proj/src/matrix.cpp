#include "otpml/matrix.hpp"

#include "otpml/error.hpp"

#include <string>

namespace otpml {

FeatureView::FeatureView(std::vector<std::span<const double>> columns, std::size_t rows)
    : columns_(std::move(columns)), rows_(rows) {
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].size() != rows_) {
      throw Error(ErrorKind::ShapeMismatch, "column " + std::to_string(c) + " has " +
                                                std::to_string(columns_[c].size()) + " rows, expected " +
                                                std::to_string(rows_));
    }
  }
}

void FeatureView::copy_row(std::size_t row, std::span<double> out) const {
  for (std::size_t c = 0; c < columns_.size(); ++c) out[c] = columns_[c][row];
}

std::vector<double> FeatureView::row(std::size_t row) const {
  std::vector<double> out(columns_.size());
  copy_row(row, out);
  return out;
}

ColumnMatrix::ColumnMatrix(std::size_t rows, std::size_t cols)
    : columns_(cols, std::vector<double>(rows, 0.0)), rows_(rows) {}

ColumnMatrix ColumnMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t width = rows.empty() ? 0 : rows.front().size();
  ColumnMatrix m(rows.size(), width);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw Error(ErrorKind::ShapeMismatch, "row " + std::to_string(r) + " has width " +
                                                std::to_string(rows[r].size()) + ", expected " +
                                                std::to_string(width));
    }
    for (std::size_t c = 0; c < width; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

FeatureView ColumnMatrix::view() const {
  std::vector<std::span<const double>> cols;
  cols.reserve(columns_.size());
  for (const auto& c : columns_) cols.emplace_back(c);
  return FeatureView(std::move(cols), rows_);
}

ColumnMatrix gather_rows(const FeatureView& x, std::span<const std::size_t> rows) {
  ColumnMatrix out(rows.size(), x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    auto src = x.column(c);
    auto dst = out.column(c);
    for (std::size_t i = 0; i < rows.size(); ++i) dst[i] = src[rows[i]];
  }
  return out;
}

}  // namespace otpml
