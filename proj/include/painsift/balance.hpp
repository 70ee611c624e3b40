#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "painsift/error.hpp"
#include "painsift/matrix.hpp"
#include "painsift/random.hpp"

namespace painsift {

/// Provenance of a row. Synthetic rows remember the two real rows they were
/// interpolated between.
struct RowOrigin {
  bool synthetic = false;
  std::size_t base = 0;
  std::size_t neighbor = 0;

  friend bool operator==(const RowOrigin&, const RowOrigin&) = default;
};

struct LabeledMatrix {
  Matrix rows;
  std::vector<int> labels;
  std::vector<RowOrigin> origins;

  static LabeledMatrix real(Matrix rows, std::vector<int> labels) {
    if (rows.rows() != labels.size()) throw std::invalid_argument("rows and labels differ in length");
    std::vector<RowOrigin> origins(labels.size());
    return {std::move(rows), std::move(labels), std::move(origins)};
  }

  std::size_t size() const { return labels.size(); }
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

/// SMOTE up to the majority count. Originals are kept in place; synthetic
/// rows are appended class by class (ascending label). Each one is
/// x + u * (x' - x) where x is a real minority row taken round-robin, x' one
/// of its k nearest same-class neighbours (Euclidean, ties by index) and
/// u ~ U[0, 1].
inline LabeledMatrix smote(const LabeledMatrix& data, std::size_t k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("SMOTE k must be at least 1");
  if (data.rows.rows() != data.labels.size() || data.origins.size() != data.labels.size())
    throw std::invalid_argument("LabeledMatrix sequences are not parallel");

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < data.labels.size(); ++i) by_class[data.labels[i]].push_back(i);
  std::size_t majority = 0;
  for (const auto& [label, members] : by_class) majority = std::max(majority, members.size());

  LabeledMatrix out = data;
  Rng rng(seed);
  for (const auto& [label, members] : by_class) {
    if (members.size() == majority) continue;
    if (members.size() < 2)
      throw DataError("SMOTE: class " + std::to_string(label) + " has a single sample and no neighbour");
    const auto k_eff = std::min(k, members.size() - 1);

    std::vector<std::vector<std::size_t>> neighbours(members.size());
    for (std::size_t a = 0; a < members.size(); ++a) {
      std::vector<std::pair<double, std::size_t>> dist;
      for (std::size_t b = 0; b < members.size(); ++b)
        if (b != a) dist.emplace_back(squared_distance(data.rows.row(members[a]), data.rows.row(members[b])), members[b]);
      std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_eff), dist.end());
      for (std::size_t j = 0; j < k_eff; ++j) neighbours[a].push_back(dist[j].second);
    }

    std::vector<double> synth(data.rows.cols());
    for (std::size_t n = 0; n < majority - members.size(); ++n) {
      const auto a = n % members.size();
      const auto base = members[a];
      const auto nb = neighbours[a][rng.below(k_eff)];
      const double u = rng.uniform();
      const auto x = data.rows.row(base);
      const auto y = data.rows.row(nb);
      for (std::size_t c = 0; c < synth.size(); ++c) synth[c] = x[c] + u * (y[c] - x[c]);
      out.rows.append_row(synth);
      out.labels.push_back(label);
      out.origins.push_back({true, base, nb});
    }
  }
  return out;
}

}  // namespace painsift
