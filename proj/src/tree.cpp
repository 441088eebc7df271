#include "otpml/tree.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "otpml/error.hpp"
#include "otpml/rng.hpp"

namespace otpml {

namespace {

__extension__ typedef unsigned __int128 u128;

// Sum of squared child class proportions weighted by child size, kept as an
// exact fraction: (l0^2 + l1^2) / nl + (r0^2 + r1^2) / nr = num / den.
// Maximising it is the same as maximising the weighted Gini decrease.
struct SplitScore {
  u128 num = 0;
  u128 den = 1;

  static SplitScore of(std::size_t l0, std::size_t l1, std::size_t r0, std::size_t r1) {
    const u128 nl = l0 + l1;
    const u128 nr = r0 + r1;
    const u128 sl = u128(l0) * l0 + u128(l1) * l1;
    const u128 sr = u128(r0) * r0 + u128(r1) * r1;
    return {sl * nr + sr * nl, nl * nr};
  }
  static SplitScore parent(std::size_t c0, std::size_t c1) {
    return {u128(c0) * c0 + u128(c1) * c1, u128(c0) + c1};
  }
  // a/b vs c/d with b, d > 0. num <= 2n^3 and den <= n^2, so the products
  // stay below 2^128 for any realistic n.
  friend bool operator>(const SplitScore& a, const SplitScore& b) { return a.num * b.den > b.num * a.den; }
  friend bool operator==(const SplitScore& a, const SplitScore& b) { return a.num * b.den == b.num * a.den; }
};

struct Candidate {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  SplitScore score;
};

bool better(const Candidate& c, const Candidate& best) {
  if (!best.found) return true;
  if (c.score > best.score) return true;
  if (!(c.score == best.score)) return false;
  if (c.feature != best.feature) return c.feature < best.feature;
  return c.threshold < best.threshold;
}

double split_point(double lo, double hi) {
  const double mid = std::midpoint(lo, hi);
  return mid < hi ? mid : lo;
}

double gini_of(std::size_t c0, std::size_t c1) {
  const double n = static_cast<double>(c0 + c1);
  if (n == 0.0) return 0.0;
  const double p0 = static_cast<double>(c0) / n;
  const double p1 = static_cast<double>(c1) / n;
  return 1.0 - (p0 * p0 + p1 * p1);
}

void check_inputs(const FeatureView& x, std::span<const int> y) {
  if (x.rows() == 0 || x.cols() == 0) throw Error(ErrorKind::EmptyInput, "tree needs at least one row and feature");
  if (y.size() != x.rows()) {
    throw Error(ErrorKind::ShapeMismatch,
                fmt::format("{} labels for {} rows", y.size(), x.rows()));
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw Error(ErrorKind::LabelOutOfRange, fmt::format("label {} at row {}", y[i], i));
  }
}

struct BuildOptions {
  std::optional<std::size_t> max_depth;
  std::size_t min_samples_split = 2;
  std::size_t max_features = 0;  // == p evaluates every feature in index order
  Rng* rng = nullptr;            // required when max_features < p
};

// Recursive partitioning over presorted per-feature orders. Each node owns
// the same [begin, end) range in every order array; a split stably
// partitions all of them.
class TreeBuilder {
 public:
  TreeBuilder(const FeatureView& x, std::span<const int> y, std::span<const std::size_t> sample_rows,
              const BuildOptions& opts)
      : opts_(opts), n_features_(x.cols()), n_samples_(sample_rows.size()) {
    values_.resize(n_features_);
    order_.resize(n_features_);
    labels_.resize(n_samples_);
    for (std::size_t s = 0; s < n_samples_; ++s) labels_[s] = static_cast<std::uint8_t>(y[sample_rows[s]]);
    for (std::size_t f = 0; f < n_features_; ++f) {
      auto col = x.column(f);
      auto& v = values_[f];
      v.resize(n_samples_);
      for (std::size_t s = 0; s < n_samples_; ++s) v[s] = col[sample_rows[s]];
      auto& o = order_[f];
      o.resize(n_samples_);
      std::iota(o.begin(), o.end(), 0u);
      std::stable_sort(o.begin(), o.end(), [&v](std::uint32_t a, std::uint32_t b) { return v[a] < v[b]; });
    }
    goes_left_.resize(n_samples_);
    scratch_.resize(n_samples_);
    feature_pool_.resize(n_features_);
  }

  Tree build() {
    Tree t;
    t.n_features = n_features_;
    t.nodes.reserve(64);
    grow(t, 0, n_samples_, 0);
    return t;
  }

 private:
  std::int32_t grow(Tree& t, std::size_t begin, std::size_t end, std::size_t depth) {
    std::array<std::size_t, 2> counts{};
    for (std::size_t k = begin; k < end; ++k) ++counts[labels_[order_[0][k]]];

    TreeNode node;
    node.depth = depth;
    node.samples = end - begin;
    node.class_counts = counts;
    node.gini = gini_of(counts[0], counts[1]);
    node.predicted_class = counts[1] > counts[0] ? 1 : 0;
    node.confidence = static_cast<double>(std::max(counts[0], counts[1])) / static_cast<double>(node.samples);

    const auto index = static_cast<std::int32_t>(t.nodes.size());
    t.nodes.push_back(node);

    const bool pure = counts[0] == 0 || counts[1] == 0;
    const bool depth_ok = !opts_.max_depth || depth < *opts_.max_depth;
    if (pure || !depth_ok || node.samples < opts_.min_samples_split) return index;

    const Candidate best = find_split(begin, end, counts);
    if (!best.found) return index;

    const std::size_t n_left = partition(begin, end, best.feature, best.threshold);
    t.nodes[index].feature = static_cast<std::int32_t>(best.feature);
    t.nodes[index].threshold = best.threshold;
    const std::int32_t left = grow(t, begin, begin + n_left, depth + 1);
    const std::int32_t right = grow(t, begin + n_left, end, depth + 1);
    t.nodes[index].left = left;
    t.nodes[index].right = right;
    return index;
  }

  // Best threshold on one feature, or found=false when the feature is
  // constant within the node.
  Candidate scan_feature(std::size_t f, std::size_t begin, std::size_t end, const std::array<std::size_t, 2>& counts,
                         bool& constant) const {
    const auto& o = order_[f];
    const auto& v = values_[f];
    Candidate best;
    constant = true;
    std::array<std::size_t, 2> left{};
    for (std::size_t k = begin; k + 1 < end; ++k) {
      ++left[labels_[o[k]]];
      const double lo = v[o[k]];
      const double hi = v[o[k + 1]];
      if (!(lo < hi)) continue;
      constant = false;
      Candidate c{true, f, split_point(lo, hi),
                  SplitScore::of(left[0], left[1], counts[0] - left[0], counts[1] - left[1])};
      if (!best.found || c.score > best.score) best = c;
    }
    return best;
  }

  Candidate find_split(std::size_t begin, std::size_t end, const std::array<std::size_t, 2>& counts) {
    Candidate best;
    bool constant = false;
    if (opts_.max_features >= n_features_) {
      for (std::size_t f = 0; f < n_features_; ++f) {
        const Candidate c = scan_feature(f, begin, end, counts, constant);
        if (c.found && better(c, best)) best = c;
      }
    } else {
      // Draw features without replacement until max_features non-constant
      // ones have been examined (or the pool runs out).
      std::iota(feature_pool_.begin(), feature_pool_.end(), std::size_t{0});
      std::size_t examined = 0;
      for (std::size_t i = 0; i < n_features_ && examined < opts_.max_features; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(opts_.rng->uniform_index(n_features_ - i));
        std::swap(feature_pool_[i], feature_pool_[j]);
        const Candidate c = scan_feature(feature_pool_[i], begin, end, counts, constant);
        if (constant) continue;
        ++examined;
        if (c.found && better(c, best)) best = c;
      }
    }
    if (best.found && !(best.score > SplitScore::parent(counts[0], counts[1]))) best.found = false;
    return best;
  }

  std::size_t partition(std::size_t begin, std::size_t end, std::size_t feature, double threshold) {
    const auto& v = values_[feature];
    std::size_t n_left = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const std::uint32_t s = order_[feature][k];
      goes_left_[s] = v[s] <= threshold;
      n_left += goes_left_[s];
    }
    for (auto& o : order_) {
      std::size_t l = begin;
      std::size_t r = 0;
      for (std::size_t k = begin; k < end; ++k) {
        const std::uint32_t s = o[k];
        if (goes_left_[s]) {
          o[l++] = s;
        } else {
          scratch_[r++] = s;
        }
      }
      std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(r), o.begin() + static_cast<std::ptrdiff_t>(l));
    }
    return n_left;
  }

  BuildOptions opts_;
  std::size_t n_features_;
  std::size_t n_samples_;
  std::vector<std::vector<double>> values_;        // [feature][sample]
  std::vector<std::vector<std::uint32_t>> order_;  // [feature] samples sorted by value
  std::vector<std::uint8_t> labels_;
  std::vector<std::uint8_t> goes_left_;
  std::vector<std::uint32_t> scratch_;
  std::vector<std::size_t> feature_pool_;
};

Tree fit_one_forest_tree(const FeatureView& x, std::span<const int> y, const ForestConfig& cfg,
                         std::size_t max_features, std::size_t index) {
  Rng rng(derive_seed(cfg.seed, index));
  std::vector<std::size_t> rows(x.rows());
  if (cfg.bootstrap) {
    for (auto& r : rows) r = static_cast<std::size_t>(rng.uniform_index(x.rows()));
  } else {
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  }
  BuildOptions opts{cfg.max_depth, cfg.min_samples_split, max_features, &rng};
  return TreeBuilder(x, y, rows, opts).build();
}

void render_node(const Tree& t, std::size_t index, std::span<const std::string> names,
                 std::optional<std::size_t> max_depth, std::string& out) {
  const TreeNode& n = t.nodes[index];
  if (max_depth && n.depth > *max_depth) return;
  out.append(2 * n.depth, ' ');
  if (n.is_leaf()) {
    out += fmt::format("[d{}] leaf", n.depth);
  } else {
    out += fmt::format("[d{}] {} <= {:.4f}", n.depth, names[static_cast<std::size_t>(n.feature)], n.threshold);
  }
  out += fmt::format(" | n={} gini={:.4f} class={} conf={:.2f}\n", n.samples, n.gini, n.predicted_class, n.confidence);
  if (!n.is_leaf()) {
    render_node(t, static_cast<std::size_t>(n.left), names, max_depth, out);
    render_node(t, static_cast<std::size_t>(n.right), names, max_depth, out);
  }
}

}  // namespace

std::size_t Tree::depth() const {
  std::size_t d = 0;
  for (const auto& n : nodes) d = std::max(d, n.depth);
  return d;
}

std::size_t Tree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

Tree fit_tree(const FeatureView& x, std::span<const int> y, const TreeConfig& cfg) {
  check_inputs(x, y);
  if (cfg.max_depth && *cfg.max_depth < 1) throw Error(ErrorKind::InvalidConfig, "max_depth must be >= 1");
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  BuildOptions opts{cfg.max_depth, cfg.min_samples_split, x.cols(), nullptr};
  return TreeBuilder(x, y, rows, opts).build();
}

TreePrediction predict_tree(const Tree& t, std::span<const double> row) {
  if (row.size() != t.n_features) {
    throw Error(ErrorKind::ShapeMismatch, fmt::format("row has {} values, tree expects {}", row.size(), t.n_features));
  }
  std::size_t i = 0;
  while (!t.nodes[i].is_leaf()) {
    const TreeNode& n = t.nodes[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return {t.nodes[i].predicted_class, t.nodes[i].confidence};
}

std::vector<int> predict_tree(const Tree& t, const FeatureView& x) {
  std::vector<int> out(x.rows());
  std::vector<double> row(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    x.copy_row(r, row);
    out[r] = predict_tree(t, row).label;
  }
  return out;
}

std::vector<double> feature_importance(const Tree& t, std::size_t n_features) {
  std::vector<double> imp(n_features, 0.0);
  if (t.nodes.empty()) return imp;
  const double total = static_cast<double>(t.root().samples);
  for (const auto& n : t.nodes) {
    if (n.is_leaf()) continue;
    const TreeNode& l = t.nodes[static_cast<std::size_t>(n.left)];
    const TreeNode& r = t.nodes[static_cast<std::size_t>(n.right)];
    const double ns = static_cast<double>(n.samples);
    const double decrease = n.gini - (static_cast<double>(l.samples) / ns) * l.gini -
                            (static_cast<double>(r.samples) / ns) * r.gini;
    imp[static_cast<std::size_t>(n.feature)] += (ns / total) * decrease;
  }
  const double sum = std::accumulate(imp.begin(), imp.end(), 0.0);
  if (sum > 0.0) {
    for (double& v : imp) v /= sum;
  }
  return imp;
}

std::string render_tree(const Tree& t, std::span<const std::string> names, std::optional<std::size_t> max_render_depth) {
  if (names.size() != t.n_features) {
    throw Error(ErrorKind::ShapeMismatch, fmt::format("{} names for {} features", names.size(), t.n_features));
  }
  std::string out;
  if (!t.nodes.empty()) render_node(t, 0, names, max_render_depth, out);
  return out;
}

Forest fit_forest(const FeatureView& x, std::span<const int> y, const ForestConfig& cfg) {
  check_inputs(x, y);
  if (cfg.n_estimators < 1) throw Error(ErrorKind::InvalidConfig, "n_estimators must be >= 1");
  if (cfg.max_depth && *cfg.max_depth < 1) throw Error(ErrorKind::InvalidConfig, "max_depth must be >= 1");
  const std::size_t p = x.cols();
  const std::size_t max_features =
      std::clamp<std::size_t>(cfg.max_features.value_or(static_cast<std::size_t>(std::ceil(std::sqrt(double(p))))), 1, p);

  Forest forest;
  forest.trees.resize(cfg.n_estimators);
  std::size_t threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  threads = std::min(threads, cfg.n_estimators);
  if (threads <= 1) {
    for (std::size_t i = 0; i < cfg.n_estimators; ++i) forest.trees[i] = fit_one_forest_tree(x, y, cfg, max_features, i);
    return forest;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < cfg.n_estimators; i = next++) {
          try {
            forest.trees[i] = fit_one_forest_tree(x, y, cfg, max_features, i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return forest;
}

int predict_forest(const Forest& f, std::span<const double> row) {
  if (f.trees.empty()) throw Error(ErrorKind::EmptyInput, "empty forest");
  std::size_t ones = 0;
  for (const auto& t : f.trees) ones += static_cast<std::size_t>(predict_tree(t, row).label);
  return 2 * ones > f.trees.size() ? 1 : 0;
}

std::vector<int> predict_forest(const Forest& f, const FeatureView& x) {
  std::vector<int> out(x.rows());
  std::vector<double> row(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    x.copy_row(r, row);
    out[r] = predict_forest(f, row);
  }
  return out;
}

std::string render_forest(const Forest& f, std::span<const std::string> names,
                          std::optional<std::size_t> max_render_depth) {
  std::string out;
  for (std::size_t i = 0; i < f.trees.size(); ++i) {
    out += fmt::format("=== tree {} ===\n", i);
    out += render_tree(f.trees[i], names, max_render_depth);
  }
  return out;
}

}  // namespace otpml
