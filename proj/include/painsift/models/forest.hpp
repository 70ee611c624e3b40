#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "painsift/models/tree.hpp"

namespace painsift {

struct ForestParams {
  std::vector<TreeParams> trees;

  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

struct ForestOptions {
  std::size_t n_trees = 100;
  TreeOptions tree;
  std::optional<double> feature_fraction;  // nullopt: ceil(sqrt(d)) features per split
  bool bootstrap = true;
};

inline std::size_t features_per_split(const ForestOptions& opt, std::size_t d) {
  if (d == 0) return 0;
  const double want = opt.feature_fraction ? std::ceil(*opt.feature_fraction * static_cast<double>(d))
                                           : std::ceil(std::sqrt(static_cast<double>(d)));
  return std::clamp<std::size_t>(static_cast<std::size_t>(want), 1, d);
}

/// Each tree draws from its own RNG stream derived from (seed, tree index),
/// so trees are independent of training order.
inline ForestParams train_forest(const Matrix& x, std::span<const int> y, std::size_t classes,
                                 const ForestOptions& opt, std::uint64_t seed) {
  require_training_set(x, y, 1);
  if (opt.n_trees < 1) throw std::invalid_argument("forest needs at least one tree");
  if (opt.feature_fraction && !(*opt.feature_fraction > 0.0 && *opt.feature_fraction <= 1.0))
    throw std::invalid_argument("feature fraction must lie in (0, 1]");
  const auto per_split = features_per_split(opt, x.cols());
  ForestParams forest;
  forest.trees.reserve(opt.n_trees);
  for (std::size_t t = 0; t < opt.n_trees; ++t) {
    Rng rng(derive_seed(seed, t));
    std::vector<std::size_t> samples(x.rows());
    if (opt.bootstrap) {
      for (auto& s : samples) s = static_cast<std::size_t>(rng.below(x.rows()));
      std::sort(samples.begin(), samples.end());
    } else {
      std::iota(samples.begin(), samples.end(), 0);
    }
    forest.trees.push_back(detail::TreeBuilder(x, y, classes, opt.tree, per_split, &rng).build(std::move(samples)));
  }
  return forest;
}

/// Vote fractions over dense classes.
inline std::vector<double> forest_votes(const ForestParams& f, std::span<const double> x, std::size_t classes) {
  std::vector<double> votes(classes, 0.0);
  for (const auto& t : f.trees) votes[static_cast<std::size_t>(tree_leaf(t, x).label)] += 1.0;
  for (auto& v : votes) v /= static_cast<double>(f.trees.size());
  return votes;
}

}  // namespace painsift
