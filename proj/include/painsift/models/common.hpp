#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "painsift/error.hpp"
#include "painsift/matrix.hpp"

namespace painsift {

/// Maps task labels onto dense indices 0..C-1 (ascending label order).
class LabelMap {
 public:
  LabelMap() = default;
  explicit LabelMap(std::vector<int> labels) : labels_(std::move(labels)) {
    if (!std::is_sorted(labels_.begin(), labels_.end()) ||
        std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
      throw std::invalid_argument("label map must be strictly ascending");
  }

  static LabelMap from_targets(std::span<const int> y) {
    std::set<int> uniq(y.begin(), y.end());
    return LabelMap(std::vector<int>(uniq.begin(), uniq.end()));
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<int>& labels() const { return labels_; }
  int label(std::size_t index) const { return labels_.at(index); }

  std::size_t index(int label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label) throw std::invalid_argument("label not in label map");
    return static_cast<std::size_t>(it - labels_.begin());
  }

  std::vector<int> encode(std::span<const int> y) const {
    std::vector<int> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = static_cast<int>(index(y[i]));
    return out;
  }

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  std::vector<int> labels_;
};

/// Index of the largest entry; ties resolve to the smallest index.
inline std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

inline void softmax_inplace(std::span<double> z) {
  const double mx = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (auto& v : z) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (auto& v : z) v /= sum;
}

inline void require_finite(const Matrix& x) {
  for (double v : x.data())
    if (!std::isfinite(v)) throw DataError("feature matrix contains a non-finite value");
}

inline void require_training_set(const Matrix& x, std::span<const int> y, std::size_t min_rows) {
  if (x.rows() != y.size()) throw std::invalid_argument("X and y differ in length");
  if (x.rows() < min_rows) throw DataError("training set needs at least " + std::to_string(min_rows) + " rows");
}

}  // namespace painsift
