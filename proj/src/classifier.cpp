#include "otpml/classifier.hpp"

namespace otpml {

std::vector<int> Classifier::predict_all(const FeatureView& x) const {
  std::vector<int> out(x.rows());
  std::vector<double> row(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    x.copy_row(r, row);
    out[r] = predict(row);
  }
  return out;
}

}  // namespace otpml
