#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "painsift/error.hpp"

namespace painsift {

using ConfusionMatrix = std::vector<std::vector<std::size_t>>;

/// cell[i][j] = number of instances with true class i predicted as j.
inline ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> pred, int num_classes) {
  if (truth.size() != pred.size()) throw std::invalid_argument("true and predicted sequences differ in length");
  if (truth.empty()) throw std::invalid_argument("cannot build a confusion matrix from zero instances");
  const auto c = static_cast<std::size_t>(num_classes);
  ConfusionMatrix m(c, std::vector<std::size_t>(c, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_classes || pred[i] < 0 || pred[i] >= num_classes)
      throw std::invalid_argument("label outside the task's label set");
    ++m[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(pred[i])];
  }
  return m;
}

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

// 0/0 is taken as 0 everywhere.
inline double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

inline double harmonic_mean(double p, double r) { return safe_ratio(2.0 * p * r, p + r); }

struct StandardMetrics {
  std::vector<Prf> per_class;
  std::vector<std::size_t> support;  // true instances per class
  Prf weighted;                      // support-weighted average
};

inline StandardMetrics standard_prf(const ConfusionMatrix& m) {
  if (m.empty()) throw std::invalid_argument("empty confusion matrix");
  const auto c = m.size();
  StandardMetrics out;
  std::size_t total = 0;
  for (std::size_t i = 0; i < c; ++i) {
    std::size_t row = 0, col = 0;
    for (std::size_t j = 0; j < c; ++j) {
      row += m[i][j];
      col += m[j][i];
    }
    Prf prf;
    prf.precision = safe_ratio(static_cast<double>(m[i][i]), static_cast<double>(col));
    prf.recall = safe_ratio(static_cast<double>(m[i][i]), static_cast<double>(row));
    prf.f_measure = harmonic_mean(prf.precision, prf.recall);
    out.per_class.push_back(prf);
    out.support.push_back(row);
    total += row;
  }
  for (std::size_t i = 0; i < c; ++i) {
    const double w = safe_ratio(static_cast<double>(out.support[i]), static_cast<double>(total));
    out.weighted.precision += w * out.per_class[i].precision;
    out.weighted.recall += w * out.per_class[i].recall;
    out.weighted.f_measure += w * out.per_class[i].f_measure;
  }
  return out;
}

/// Ordinal-aware counts: exact matches add 1 to tp; over-predictions add the
/// gap to fp; under-predictions add the gap to fn.
struct GradedCounts {
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;

  friend bool operator==(const GradedCounts&, const GradedCounts&) = default;
};

inline constexpr int kOrdinalLevels = 4;

inline GradedCounts graded_counts(std::span<const int> truth, std::span<const int> pred) {
  if (truth.size() != pred.size()) throw std::invalid_argument("true and predicted sequences differ in length");
  GradedCounts g;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i], p = pred[i];
    if (t < 0 || t >= kOrdinalLevels || p < 0 || p >= kOrdinalLevels)
      throw std::invalid_argument("ordinal value outside 0..3");
    if (p == t)
      g.tp += 1.0;
    else if (p > t)
      g.fp += p - t;
    else
      g.fn += t - p;
  }
  return g;
}

inline Prf graded_prf(const GradedCounts& g) {
  Prf out;
  out.precision = safe_ratio(g.tp, g.tp + g.fp);
  out.recall = safe_ratio(g.tp, g.tp + g.fn);
  out.f_measure = harmonic_mean(out.precision, out.recall);
  return out;
}

}  // namespace painsift
