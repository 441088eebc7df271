#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "otpml/classifier.hpp"
#include "otpml/matrix.hpp"

namespace otpml {

struct EnsembleMember {
  std::string name;
  std::shared_ptr<const Classifier> model;
  double weight = 1.0;
};

/// Weighted vote over heterogeneous fitted classifiers.
struct EnsembleSpec {
  std::vector<EnsembleMember> members;
};

/// Throws EmptyEnsemble (no members or no positive weight) or BadValue
/// (negative / non-finite weight).
void validate(const EnsembleSpec& e);

/// argmax over classes of the summed member weights; ties go to 0.
/// Throws EmptyEnsemble, ShapeMismatch.
int predict_vote(const EnsembleSpec& e, std::span<const double> row);
std::vector<int> predict_vote(const EnsembleSpec& e, const FeatureView& x);

/// Tallies precomputed member labels (member-major) with the given weights.
std::vector<int> tally_votes(std::span<const std::vector<int>> member_labels, std::span<const double> weights);

/// Picks the candidate weight vector with the best validation accuracy;
/// ties go to the earliest candidate. Each candidate must have one weight
/// per member. Throws EmptyInput, ShapeMismatch.
EnsembleSpec grid_search_weights(std::span<const EnsembleMember> members,
                                 std::span<const std::vector<double>> candidates, const FeatureView& x_val,
                                 std::span<const int> y_val);

}  // namespace otpml
