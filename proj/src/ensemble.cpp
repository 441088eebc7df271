#include "otpml/ensemble.hpp"

#include <cmath>

#include <fmt/format.h>

#include "otpml/error.hpp"

namespace otpml {

void validate(const EnsembleSpec& e) {
  if (e.members.empty()) throw Error(ErrorKind::EmptyEnsemble, "no members");
  bool any_positive = false;
  for (const auto& m : e.members) {
    if (!m.model) throw Error(ErrorKind::EmptyEnsemble, "member " + m.name + " has no model");
    if (!std::isfinite(m.weight) || m.weight < 0.0) {
      throw Error(ErrorKind::BadValue, fmt::format("member {} has weight {}", m.name, m.weight));
    }
    any_positive = any_positive || m.weight > 0.0;
  }
  if (!any_positive) throw Error(ErrorKind::EmptyEnsemble, "all weights are zero");
}

int predict_vote(const EnsembleSpec& e, std::span<const double> row) {
  validate(e);
  double tally[2] = {0.0, 0.0};
  for (const auto& m : e.members) {
    if (m.model->n_features() != row.size()) {
      throw Error(ErrorKind::ShapeMismatch,
                  fmt::format("member {} expects {} values, row has {}", m.name, m.model->n_features(), row.size()));
    }
    if (m.weight == 0.0) continue;
    tally[m.model->predict(row)] += m.weight;
  }
  return tally[1] > tally[0] ? 1 : 0;
}

std::vector<int> predict_vote(const EnsembleSpec& e, const FeatureView& x) {
  validate(e);
  std::vector<std::vector<int>> labels;
  std::vector<double> weights;
  for (const auto& m : e.members) {
    if (m.model->n_features() != x.cols()) {
      throw Error(ErrorKind::ShapeMismatch,
                  fmt::format("member {} expects {} values, matrix has {}", m.name, m.model->n_features(), x.cols()));
    }
    labels.push_back(m.weight == 0.0 ? std::vector<int>(x.rows(), 0) : m.model->predict_all(x));
    weights.push_back(m.weight);
  }
  return tally_votes(labels, weights);
}

std::vector<int> tally_votes(std::span<const std::vector<int>> member_labels, std::span<const double> weights) {
  if (member_labels.size() != weights.size()) throw Error(ErrorKind::ShapeMismatch, "one weight per member");
  if (member_labels.empty()) throw Error(ErrorKind::EmptyEnsemble, "no members");
  const std::size_t n = member_labels.front().size();
  std::vector<int> out(n);
  for (std::size_t r = 0; r < n; ++r) {
    double tally[2] = {0.0, 0.0};
    for (std::size_t m = 0; m < member_labels.size(); ++m) {
      if (member_labels[m].size() != n) throw Error(ErrorKind::ShapeMismatch, "member label lengths differ");
      tally[member_labels[m][r]] += weights[m];
    }
    out[r] = tally[1] > tally[0] ? 1 : 0;
  }
  return out;
}

EnsembleSpec grid_search_weights(std::span<const EnsembleMember> members,
                                 std::span<const std::vector<double>> candidates, const FeatureView& x_val,
                                 std::span<const int> y_val) {
  if (candidates.empty()) throw Error(ErrorKind::EmptyInput, "no candidate weight sets");
  if (members.empty()) throw Error(ErrorKind::EmptyEnsemble, "no members");
  if (x_val.rows() == 0) throw Error(ErrorKind::EmptyInput, "no validation rows");
  if (y_val.size() != x_val.rows()) throw Error(ErrorKind::ShapeMismatch, "validation labels");

  std::vector<std::vector<int>> labels;
  for (const auto& m : members) labels.push_back(m.model->predict_all(x_val));

  std::size_t best = 0;
  std::size_t best_hits = 0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (candidates[c].size() != members.size()) {
      throw Error(ErrorKind::ShapeMismatch, fmt::format("candidate {} has {} weights for {} members", c,
                                                        candidates[c].size(), members.size()));
    }
    EnsembleSpec probe{std::vector<EnsembleMember>(members.begin(), members.end())};
    for (std::size_t m = 0; m < members.size(); ++m) probe.members[m].weight = candidates[c][m];
    validate(probe);
    const auto votes = tally_votes(labels, candidates[c]);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < votes.size(); ++r) hits += votes[r] == y_val[r];
    if (c == 0 || hits > best_hits) {
      best = c;
      best_hits = hits;
    }
  }
  EnsembleSpec out{std::vector<EnsembleMember>(members.begin(), members.end())};
  for (std::size_t m = 0; m < members.size(); ++m) out.members[m].weight = candidates[best][m];
  return out;
}

}  // namespace otpml
