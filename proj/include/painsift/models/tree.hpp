#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "painsift/models/common.hpp"
#include "painsift/random.hpp"

namespace painsift {

/// CART node. Internal nodes have feature >= 0 and both children; leaves
/// carry the class histogram of their training samples.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;                   // dense class index (leaves)
  std::vector<double> histogram;   // per-class counts (leaves)

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct TreeParams {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

struct TreeOptions {
  std::size_t max_depth = 20;  // 0 = unlimited
  std::size_t min_leaf = 2;
};

/// Gini impurity 1 - sum p_c^2 of a class histogram.
inline double gini(std::span<const double> histogram) {
  double n = 0.0, sq = 0.0;
  for (double c : histogram) {
    n += c;
    sq += c * c;
  }
  return n > 0.0 ? 1.0 - sq / (n * n) : 0.0;
}

namespace detail {

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const int> y, std::size_t classes, const TreeOptions& opt,
              std::size_t features_per_split, Rng* rng)
      : x_(x), y_(y), classes_(classes), opt_(opt), per_split_(features_per_split), rng_(rng) {}

  TreeParams build(std::vector<std::size_t> samples) {
    TreeParams t;
    grow(t, std::move(samples), 0);
    return t;
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;  // weighted child Gini
  };

  int grow(TreeParams& t, std::vector<std::size_t> samples, std::size_t depth) {
    const int id = static_cast<int>(t.nodes.size());
    t.nodes.emplace_back();
    std::vector<double> hist(classes_, 0.0);
    for (auto s : samples) hist[static_cast<std::size_t>(y_[s])] += 1.0;

    const bool pure = std::count_if(hist.begin(), hist.end(), [](double c) { return c > 0; }) <= 1;
    const bool depth_done = opt_.max_depth != 0 && depth >= opt_.max_depth;
    std::optional<Split> split;
    if (!pure && !depth_done && samples.size() >= 2 * std::max<std::size_t>(opt_.min_leaf, 1))
      split = best_split(samples);
    if (!split) {
      auto& leaf = t.nodes[static_cast<std::size_t>(id)];
      leaf.label = static_cast<int>(argmax(hist));
      leaf.histogram = std::move(hist);
      return id;
    }

    std::vector<std::size_t> left, right;
    for (auto s : samples) (x_(s, static_cast<std::size_t>(split->feature)) <= split->threshold ? left : right).push_back(s);
    samples.clear();
    samples.shrink_to_fit();
    const int l = grow(t, std::move(left), depth + 1);
    const int r = grow(t, std::move(right), depth + 1);
    auto& node = t.nodes[static_cast<std::size_t>(id)];
    node.feature = split->feature;
    node.threshold = split->threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  std::vector<std::size_t> candidate_features() {
    std::vector<std::size_t> f(x_.cols());
    std::iota(f.begin(), f.end(), 0);
    if (rng_ && per_split_ < f.size()) {
      // partial Fisher-Yates
      for (std::size_t i = 0; i < per_split_; ++i) {
        const auto j = i + static_cast<std::size_t>(rng_->below(f.size() - i));
        std::swap(f[i], f[j]);
      }
      f.resize(per_split_);
      std::sort(f.begin(), f.end());
    }
    return f;
  }

  // Lowest weighted child Gini over (feature, midpoint) candidates; the first
  // candidate wins ties, scanning features and thresholds in ascending order.
  std::optional<Split> best_split(const std::vector<std::size_t>& samples) {
    const auto n = samples.size();
    const auto min_leaf = std::max<std::size_t>(opt_.min_leaf, 1);
    std::vector<double> total(classes_, 0.0);
    for (auto s : samples) total[static_cast<std::size_t>(y_[s])] += 1.0;

    std::optional<Split> best;
    std::vector<std::pair<double, int>> column(n);
    std::vector<double> left(classes_), right(classes_);
    for (auto f : candidate_features()) {
      for (std::size_t i = 0; i < n; ++i) column[i] = {x_(samples[i], f), y_[samples[i]]};
      std::sort(column.begin(), column.end());
      if (column.front().first == column.back().first) continue;
      std::fill(left.begin(), left.end(), 0.0);
      right = total;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto c = static_cast<std::size_t>(column[i].second);
        left[c] += 1.0;
        right[c] -= 1.0;
        const auto nl = i + 1;
        if (column[i].first == column[i + 1].first || nl < min_leaf || n - nl < min_leaf) continue;
        const double impurity =
            (static_cast<double>(nl) * gini(left) + static_cast<double>(n - nl) * gini(right)) / static_cast<double>(n);
        if (!best || impurity < best->impurity) {
          const double lo = column[i].first, hi = column[i + 1].first;
          best = Split{static_cast<int>(f), lo + (hi - lo) / 2.0, impurity};
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  std::span<const int> y_;
  std::size_t classes_;
  TreeOptions opt_;
  std::size_t per_split_;
  Rng* rng_;
};

}  // namespace detail

/// Greedy CART on Gini impurity using every feature at every split. `y`
/// holds dense class indices in [0, classes).
inline TreeParams train_tree(const Matrix& x, std::span<const int> y, std::size_t classes, const TreeOptions& opt) {
  require_training_set(x, y, 1);
  std::vector<std::size_t> all(x.rows());
  std::iota(all.begin(), all.end(), 0);
  return detail::TreeBuilder(x, y, classes, opt, x.cols(), nullptr).build(std::move(all));
}

inline const TreeNode& tree_leaf(const TreeParams& t, std::span<const double> x) {
  const TreeNode* node = &t.nodes.at(0);
  while (!node->is_leaf())
    node = &t.nodes[static_cast<std::size_t>(x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left
                                                                                                         : node->right)];
  return *node;
}

/// Leaf histogram fractions.
inline std::vector<double> tree_probabilities(const TreeParams& t, std::span<const double> x) {
  const auto& leaf = tree_leaf(t, x);
  std::vector<double> p = leaf.histogram;
  double n = 0.0;
  for (double c : p) n += c;
  for (auto& v : p) v /= n;
  return p;
}

}  // namespace painsift
