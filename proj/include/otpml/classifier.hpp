#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "otpml/bayes.hpp"
#include "otpml/glm.hpp"
#include "otpml/knn.hpp"
#include "otpml/matrix.hpp"
#include "otpml/tree.hpp"

namespace otpml {

/// A fitted binary classifier that exposes hard labels only.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual int predict(std::span<const double> row) const = 0;
  virtual std::size_t n_features() const = 0;

  std::vector<int> predict_all(const FeatureView& x) const;
};

class TreeClassifier final : public Classifier {
 public:
  explicit TreeClassifier(Tree tree) : tree_(std::move(tree)) {}
  int predict(std::span<const double> row) const override { return predict_tree(tree_, row).label; }
  std::size_t n_features() const override { return tree_.n_features; }
  const Tree& tree() const noexcept { return tree_; }

 private:
  Tree tree_;
};

class ForestClassifier final : public Classifier {
 public:
  ForestClassifier(Forest forest, std::size_t n_features) : forest_(std::move(forest)), n_features_(n_features) {}
  int predict(std::span<const double> row) const override { return predict_forest(forest_, row); }
  std::size_t n_features() const override { return n_features_; }
  const Forest& forest() const noexcept { return forest_; }

 private:
  Forest forest_;
  std::size_t n_features_;
};

class GnbClassifier final : public Classifier {
 public:
  explicit GnbClassifier(GnbModel model) : model_(std::move(model)) {}
  int predict(std::span<const double> row) const override { return predict_gnb(model_, row).label; }
  std::size_t n_features() const override { return model_.n_features(); }

 private:
  GnbModel model_;
};

class KnnClassifier final : public Classifier {
 public:
  explicit KnnClassifier(KnnModel model) : model_(std::move(model)) {}
  int predict(std::span<const double> row) const override { return predict_knn(model_, row); }
  std::size_t n_features() const override { return model_.n_features(); }

 private:
  KnnModel model_;
};

/// Class 1 when the fitted mean response is >= cutoff (0.5 for logistic or
/// a 0/1 least-squares fit, 95 for models of the otp percentage).
class GlmClassifier final : public Classifier {
 public:
  GlmClassifier(GlmFit fit, double cutoff) : fit_(std::move(fit)), cutoff_(cutoff) {}
  int predict(std::span<const double> row) const override { return predict_glm(fit_, row) >= cutoff_ ? 1 : 0; }
  std::size_t n_features() const override { return fit_.n_features(); }
  const GlmFit& fit() const noexcept { return fit_; }

 private:
  GlmFit fit_;
  double cutoff_;
};

}  // namespace otpml
